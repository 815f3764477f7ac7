#include "fagg/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fagg/errors.hpp"

namespace fagg {
namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;
constexpr double kInv2Pi = 0.15915494309189533577;
constexpr double kDetTolerance = 1e-12;
constexpr double kStructureTolerance = 1e-12;

// Accepts +/-inf, used where limits are part of the math.
double phi_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

// AS241 (PPND16) for p <= 1/2.
double as241_lower(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852854561 + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = std::sqrt(-std::log(p));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return -val;
}

double inv_cdf_lower(double p) {
    double x = as241_lower(p);
    // Halley step; skipped once exp(x^2/2) overflows (p below ~1e-308).
    const double e = phi_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    if (std::isfinite(u)) x -= u / (1.0 + 0.5 * x * u);
    return x;
}

// Exponent of phi2(b1, b2; sin t) written without 1 - sin(t) cancellation.
// For s >= 0: (b1 - b2)^2 / (2c^2) + b1 b2 / (1 + s); mirrored for s < 0.
double plackett_exponent(double b1, double b2, double s, double c) {
    const double c2 = c * c;
    if (s >= 0.0) {
        const double d = b1 - b2;
        return (d == 0.0 ? 0.0 : d * d / (2.0 * c2)) + b1 * b2 / (1.0 + s);
    }
    const double d = b1 + b2;
    return (d == 0.0 ? 0.0 : d * d / (2.0 * c2)) - b1 * b2 / (1.0 - s);
}

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite");
}

}  // namespace

Correlation::Correlation(double value) : value_(value) {
    if (!(std::abs(value) <= 1.0)) {
        throw DomainError("correlation must lie in [-1, 1], got " + std::to_string(value));
    }
}

TrivariateCorrelation::TrivariateCorrelation(double rho12, double rho31, double rho32)
    : rho12_(Correlation(rho12).value()),
      rho31_(Correlation(rho31).value()),
      rho32_(Correlation(rho32).value()) {
    if (determinant() < -kDetTolerance) {
        throw DomainError("trivariate correlation matrix is not positive semidefinite");
    }
}

double TrivariateCorrelation::determinant() const noexcept {
    return 1.0 - rho12_ * rho12_ - rho31_ * rho31_ - rho32_ * rho32_ +
           2.0 * rho12_ * rho31_ * rho32_;
}

TrivariateCorrelation TrivariateCorrelation::two_forecaster(double rho12) {
    return {rho12, kInvSqrt2, kInvSqrt2};
}

double norm_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double norm_cdf(double x) {
    require_finite(x, "norm_cdf argument");
    return phi_cdf(x);
}

double norm_inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("norm_inv_cdf needs 0 < p < 1, got " + std::to_string(p));
    }
    if (p > 0.5) return -inv_cdf_lower(1.0 - p);
    return inv_cdf_lower(p);
}

double binorm_density(double x, double y, double rho) {
    if (!(std::abs(rho) < 1.0)) {
        throw DomainError("binorm_density needs |rho| < 1");
    }
    const double one_minus = (1.0 - rho) * (1.0 + rho);
    const double quad = x * x - 2.0 * rho * x * y + y * y;
    return kInv2Pi / std::sqrt(one_minus) * std::exp(-quad / (2.0 * one_minus));
}

double binorm_cdf(double b1, double b2, double rho, const QuadratureSpec& spec) {
    require_finite(b1, "b1");
    require_finite(b2, "b2");
    const double r = Correlation(rho).value();
    if (r == 0.0) return phi_cdf(b1) * phi_cdf(b2);
    if (r == 1.0) return phi_cdf(std::min(b1, b2));
    if (r == -1.0) return std::max(0.0, phi_cdf(b1) - phi_cdf(-b2));

    auto integrand = [b1, b2](double theta) {
        return kInv2Pi * std::exp(-plackett_exponent(b1, b2, std::sin(theta), std::cos(theta)));
    };
    const double end = std::asin(r);
    const double path = end > 0.0 ? integrate(integrand, 0.0, end, spec).value
                                   : -integrate(integrand, end, 0.0, spec).value;
    return std::clamp(phi_cdf(b1) * phi_cdf(b2) + path, 0.0, 1.0);
}

double plackett_tri_derivative(double b1, double b2, double b3,
                               const TrivariateCorrelation& corr) {
    const double rho = corr.rho12();
    if (!(std::abs(rho) < 1.0)) {
        throw SingularityError("plackett_tri_derivative needs |rho12| < 1", rho);
    }
    const double r31 = corr.rho31();
    const double r32 = corr.rho32();
    const double one_minus = (1.0 - rho) * (1.0 + rho);
    const double denom = one_minus * (one_minus - r31 * r31 - r32 * r32 + 2.0 * rho * r31 * r32);
    if (!(denom > 0.0)) {
        throw SingularityError(
            "u3 denominator is not positive at rho12 = " + std::to_string(rho), rho);
    }
    const double u3 =
        (b3 * one_minus - b1 * (r31 - rho * r32) - b2 * (r32 - rho * r31)) / std::sqrt(denom);
    return binorm_density(b1, b2, rho) * phi_cdf(u3);
}

double trinorm_cdf_special(double b1, double b2, double b3, const TrivariateCorrelation& corr,
                          const QuadratureSpec& spec) {
    if (std::abs(corr.rho31() - kInvSqrt2) > kStructureTolerance ||
        std::abs(corr.rho32() - kInvSqrt2) > kStructureTolerance || b3 != 0.0) {
        throw StructureError(
            "trinorm_cdf_special supports only rho31 = rho32 = 1/sqrt(2) and b3 = 0");
    }
    require_finite(b1, "b1");
    require_finite(b2, "b2");
    // PSD forces rho12 - rho12^2 >= 0 for this structure.
    const double rho = std::clamp(corr.rho12(), 0.0, 1.0);
    const double anchor = closed_form::trinorm_independent_anchor(b1, b2);
    if (rho == 0.0) return anchor;
    if (rho == 1.0) return closed_form::trinorm_collapsed(b1, b2);

    // With b3 = 0 and rho31 = rho32 = 1/sqrt(2), u3 = -(b1 + b2) / sqrt(2 rho (1 + rho)).
    const double sum = b1 + b2;
    auto integrand = [b1, b2, sum](double theta) {
        const double s = std::sin(theta);
        const double gate = sum == 0.0 ? 0.5 : phi_cdf(-sum / std::sqrt(2.0 * s * (1.0 + s)));
        return kInv2Pi * std::exp(-plackett_exponent(b1, b2, s, std::cos(theta))) * gate;
    };
    const double path = integrate(integrand, 0.0, std::asin(rho), spec).value;
    return std::clamp(anchor + path, 0.0, 1.0);
}

namespace closed_form {

double trinorm_independent_anchor(double b1, double b2) {
    // b1 + b2 <= 0: the box already implies Y1 + Y2 <= 0.
    if (b1 + b2 <= 0.0) return phi_cdf(b1) * phi_cdf(b2);
    const double t1 = phi_cdf(-b1);
    const double t2 = phi_cdf(-b2);
    return 0.5 * (1.0 - t1 * t1 - t2 * t2);
}

double trinorm_collapsed(double b1, double b2) {
    const double f = phi_cdf(std::min(b1, b2));
    return f - 0.5 * f * f;
}

}  // namespace closed_form

}  // namespace fagg
