#include "fagg/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fagg/errors.hpp"
#include "fagg/special_functions.hpp"

namespace fagg::oracle {
namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfPi = 0.5 * kPi;

struct Probits {
    double x;
    double y;
};

Probits probits(const ForecastPair& pair) {
    return {norm_inv_cdf(pair.p.value()), norm_inv_cdf(pair.q.value())};
}

// Reduced exponent (x^2 - 2 s x y + y^2) / (2 c^2) with s = sin t, c = cos t,
// rewritten as (x - y)^2 / (2 c^2) + x y / (1 + s).
double reduced_exponent(const Probits& z, double s, double c) {
    const double d = z.x - z.y;
    return (d == 0.0 ? 0.0 : d * d / (2.0 * c * c)) + z.x * z.y / (1.0 + s);
}

// Unreduced exponent: the reduced one minus (x^2 + y^2) / 2.
double likelihood_exponent(const Probits& z, double s, double c) {
    return reduced_exponent(z, s, c) - 0.5 * (z.x * z.x + z.y * z.y);
}

double overlap_gate(double sum, double s) {
    if (sum == 0.0) return 0.5;
    if (s <= 0.0) return sum > 0.0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-sum / std::sqrt(2.0 * s * (1.0 + s)) * kInvSqrt2);
}

}  // namespace

double likelihood(const ForecastPair& pair, double rho) {
    if (!(rho >= 0.0)) throw DomainError("likelihood needs rho >= 0");
    if (!(rho < 1.0)) throw SingularityError("likelihood is singular at rho = 1", rho);
    const Probits z = probits(pair);
    const double one_minus = (1.0 - rho) * (1.0 + rho);
    const double quad = rho * rho * z.x * z.x - 2.0 * rho * z.x * z.y + rho * rho * z.y * z.y;
    return std::exp(-quad / (2.0 * one_minus)) / std::sqrt(one_minus);
}

double i2_closed(const ForecastPair& pair) {
    const double lo = std::min(pair.p.value(), pair.q.value());
    const double hi = std::max(pair.p.value(), pair.q.value());
    return kTwoPi * (1.0 - hi) * lo;
}

double i2_quadrature(const ForecastPair& pair, const QuadratureSpec& spec) {
    const Probits z = probits(pair);
    auto integrand = [&z](double theta) {
        return std::exp(-reduced_exponent(z, std::sin(theta), std::cos(theta)));
    };
    return integrate(integrand, 0.0, kHalfPi, spec).value;
}

double i1_closed(const ForecastPair& pair) {
    const double lo = std::min(pair.p.value(), pair.q.value());
    const double hi = std::max(pair.p.value(), pair.q.value());
    // The bracket is a difference of O(1) probabilities that nearly cancel when
    // lo is small, so it is evaluated in factored form:
    //   lo + hi >= 1:  t - t^2/2 - t (1 - lo) = t (lo - t/2),  t = 1 - hi (exact)
    //   lo + hi <  1:  t - t^2/2 - (1 - lo^2 - hi^2)/2 = lo^2 / 2
    if (lo + hi >= 1.0) {
        const double tail = 1.0 - hi;
        return kTwoPi * tail * (lo - 0.5 * tail);
    }
    return kPi * lo * lo;
}

double i1_quadrature(const ForecastPair& pair, const QuadratureSpec& spec) {
    const Probits z = probits(pair);
    const double sum = z.x + z.y;
    auto integrand = [&z, sum](double theta) {
        const double s = std::sin(theta);
        return overlap_gate(sum, s) * std::exp(-reduced_exponent(z, s, std::cos(theta)));
    };
    return integrate(integrand, 0.0, kHalfPi, spec).value;
}

double posterior_quadrature(const ForecastPair& pair, const QuadratureSpec& spec) {
    return std::clamp(i1_quadrature(pair, spec) / i2_quadrature(pair, spec), 0.0, 1.0);
}

double PosteriorSummary::sample_mass() const {
    double mass = 0.0;
    for (const auto& s : density_samples) mass += s.density * s.weight;
    return mass;
}

PosteriorSummary posterior_of_rho(const ForecastPair& pair, std::size_t grid_size,
                                  const QuadratureSpec& spec) {
    if (grid_size < 2) throw DomainError("posterior grid needs at least 2 points");
    const Probits z = probits(pair);

    // lambda(sin t) * cos t, bounded on [0, pi/2].
    auto weighted = [&z](double theta) {
        return std::exp(-likelihood_exponent(z, std::sin(theta), std::cos(theta)));
    };

    PosteriorSummary out;
    out.normalizing_constant = integrate(weighted, 0.0, kHalfPi, spec).value;
    const double first_moment =
        integrate([&](double t) { return std::sin(t) * weighted(t); }, 0.0, kHalfPi, spec).value;
    out.mean_rho = std::clamp(first_moment / out.normalizing_constant, 0.0, 1.0);

    // Midpoints u_i of a uniform grid on [0, 1], mapped by
    // theta(u) = (pi/2)(u - sin(pi u) / pi). theta'' vanishes at both ends and
    // theta' at u = 0; the integrand is flat at theta = pi/2 already, so the
    // O(h^2) endpoint term of the midpoint rule cancels.
    const double du = 1.0 / static_cast<double>(grid_size);
    out.density_samples.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double u = du * (static_cast<double>(i) + 0.5);
        const double theta = kHalfPi * (u - std::sin(kPi * u) / kPi);
        const double dtheta = kHalfPi * (1.0 - std::cos(kPi * u)) * du;
        const double c = std::cos(theta);
        PosteriorSample sample;
        sample.rho = std::sin(theta);
        sample.density = weighted(theta) / c / out.normalizing_constant;
        sample.weight = c * dtheta;
        out.density_samples.push_back(sample);
    }
    return out;
}

double posterior_density(const ForecastPair& pair, double rho, double normalizing_constant) {
    if (!(normalizing_constant > 0.0)) throw DomainError("normalizing constant must be positive");
    return likelihood(pair, rho) / normalizing_constant;
}

}  // namespace fagg::oracle
