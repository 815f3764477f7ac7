#pragma once

#include <cstddef>
#include <functional>

namespace fagg {

/// Tolerances for the adaptive integrator. The defaults leave two orders of
/// magnitude under the 1e-8 identities checked by the oracle.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 2000;

    /// Throws DomainError unless both tolerances are positive and the
    /// subdivision budget is at least one.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double err_estimate = 0.0;
    std::size_t subdivisions = 0;
};

/// Global-adaptive Gauss-Kronrod (10/21 point) integration of f over [a, b].
///
/// The interval with the largest local error estimate is bisected until the
/// summed estimate is at most max(abs_tol, rel_tol * |value|). The local
/// estimate is |K21 - G10|, which is conservative for smooth integrands.
/// Nodes are interior, so integrable endpoint singularities never get
/// evaluated directly.
///
/// Throws DomainError if a >= b or f returns a non-finite value, and
/// ConvergenceError (carrying the final estimate) if the subdivision budget
/// runs out.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

}  // namespace fagg
