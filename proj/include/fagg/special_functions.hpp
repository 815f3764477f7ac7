#pragma once

#include "fagg/quadrature.hpp"

namespace fagg {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// A correlation coefficient in [-1, 1].
class Correlation {
public:
    explicit Correlation(double value);
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    double value_;
};

/// Off-diagonal entries of a 3x3 correlation matrix R. The matrix must be
/// positive semidefinite (determinant >= -1e-12, which admits the rank-2
/// structures used by the aggregator).
class TrivariateCorrelation {
public:
    TrivariateCorrelation(double rho12, double rho31, double rho32);

    [[nodiscard]] double rho12() const noexcept { return rho12_; }
    [[nodiscard]] double rho31() const noexcept { return rho31_; }
    [[nodiscard]] double rho32() const noexcept { return rho32_; }
    [[nodiscard]] double determinant() const noexcept;

    /// rho31 = rho32 = 1/sqrt(2), the structure of the two-forecaster model.
    [[nodiscard]] static TrivariateCorrelation two_forecaster(double rho12);

private:
    double rho12_;
    double rho31_;
    double rho32_;
};

double norm_pdf(double x) noexcept;

/// Standard normal CDF. Throws DomainError for non-finite x.
double norm_cdf(double x);

/// Standard normal quantile: Wichura's AS241 rational approximation followed
/// by one Halley polish against norm_cdf. Evaluated in the lower tail and
/// reflected, so norm_inv_cdf(1 - p) == -norm_inv_cdf(p) up to the rounding
/// of 1 - p. Throws DomainError unless 0 < p < 1.
double norm_inv_cdf(double p);

/// Bivariate standard normal density with correlation rho, |rho| < 1.
double binorm_density(double x, double y, double rho);

/// Bivariate standard normal CDF P(X <= b1, Y <= b2).
///
/// Integrates Plackett's identity dPhi2/drho = phi2 from rho = 0, under the
/// substitution rho = sin(theta) so the 1/sqrt(1 - rho^2) factor cancels.
/// rho = 0 and rho = +/-1 return their closed forms.
double binorm_cdf(double b1, double b2, double rho, const QuadratureSpec& spec = {});

/// Plackett's derivative of the trivariate normal CDF with respect to rho12:
/// phi2(b1, b2; rho12) * Phi(u3(rho12)). Throws SingularityError when
/// |rho12| >= 1 or the u3 denominator is not positive.
double plackett_tri_derivative(double b1, double b2, double b3, const TrivariateCorrelation& corr);

/// Trivariate normal CDF for the two-forecaster structure only:
/// rho31 = rho32 = 1/sqrt(2) and b3 = 0. Anchored at the closed form for
/// rho12 = 0 and integrated along rho12 with the Plackett derivative.
/// Any other input throws StructureError.
double trinorm_cdf_special(double b1, double b2, double b3, const TrivariateCorrelation& corr,
                          const QuadratureSpec& spec = {});

namespace closed_form {

/// Phi3(b1, b2, 0; R*) where R* has rho12 = 0: P(Y1 <= b1, Y2 <= b2, Y1 + Y2 <= 0)
/// for independent standard normals.
double trinorm_independent_anchor(double b1, double b2);

/// Phi3(b1, b2, 0; R) where R has rho12 = 1: P(Y1 <= min(b1, b2), Y2 <= -Y1).
double trinorm_collapsed(double b1, double b2);

}  // namespace closed_form

}  // namespace fagg
