#pragma once

#include <cstddef>
#include <vector>

#include "fagg/model.hpp"
#include "fagg/quadrature.hpp"

namespace fagg::oracle {

// Numerical route to the posterior-mean aggregator. Every integral over rho
// is taken under rho = sin(theta), which cancels the 1/sqrt(1 - rho^2)
// factor. I1 and I2 are in the reduced form (the common factor
// exp((x^2 + y^2) / 2) removed); the likelihood is unreduced with c = 1.

/// lambda_rho(p, q) = (1 - rho^2)^(-1/2) exp(-(rho^2 x^2 - 2 rho x y + rho^2 y^2) / (2 (1 - rho^2)))
/// with x = Phi^-1(p), y = Phi^-1(q). Throws SingularityError for rho >= 1.
double likelihood(const ForecastPair& pair, double rho);

/// 2 pi (1 - max(p, q)) min(p, q).
double i2_closed(const ForecastPair& pair);

/// Quadrature of the I2 integrand.
double i2_quadrature(const ForecastPair& pair, const QuadratureSpec& spec = {});

/// 2 pi [F_R - F_R*] with the closed-form trivariate probabilities; for
/// lo = min, hi = max:
///   lo + hi >= 1:  2 pi [(1 - hi) - (1 - hi)^2 / 2 - (1 - hi)(1 - lo)]
///   lo + hi <  1:  2 pi [(1 - hi) - (1 - hi)^2 / 2 - (1 - lo^2 - hi^2) / 2]
/// evaluated in factored form, 2 pi (1 - hi)(lo - (1 - hi) / 2) and pi lo^2,
/// which avoids cancellation for small lo.
double i1_closed(const ForecastPair& pair);

/// Quadrature of the I1 integrand, Phi((x + y) / sqrt(2 rho (1 + rho))) times
/// the I2 integrand. The Phi factor takes its limit (0, 1/2, 1) at rho = 0.
double i1_quadrature(const ForecastPair& pair, const QuadratureSpec& spec = {});

/// I1 / I2 computed entirely by quadrature.
double posterior_quadrature(const ForecastPair& pair, const QuadratureSpec& spec = {});

struct PosteriorSample {
    double rho = 0.0;
    double density = 0.0;
    /// d(rho) weight of this node.
    double weight = 0.0;
};

struct PosteriorSummary {
    /// Integral of the unreduced likelihood over [0, 1].
    double normalizing_constant = 0.0;
    double mean_rho = 0.0;
    /// Posterior density at rho_i = sin(theta(u_i)), u_i = (i + 1/2)/n, with
    /// theta(u) = (pi/2)(u - sin(pi u) / pi). The grid is dense near rho = 0 and
    /// never lands on rho = 1, where the density is infinite when p = q.
    std::vector<PosteriorSample> density_samples;

    /// Quadrature of the samples with their weights; 1 up to O(n^-4).
    [[nodiscard]] double sample_mass() const;
};

PosteriorSummary posterior_of_rho(const ForecastPair& pair, std::size_t grid_size = 1001,
                                  const QuadratureSpec& spec = {});

/// likelihood(pair, rho) / normalizing_constant.
double posterior_density(const ForecastPair& pair, double rho, double normalizing_constant);

}  // namespace fagg::oracle
