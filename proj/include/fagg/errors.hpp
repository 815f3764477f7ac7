#pragma once

#include <stdexcept>
#include <string>

namespace fagg {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A correlation-dependent expression hit a removable or true singularity.
class SingularityError : public DomainError {
public:
    SingularityError(const std::string& what, double rho)
        : DomainError(what), rho_(rho) {}

    [[nodiscard]] double rho() const noexcept { return rho_; }

private:
    double rho_;
};

// Trivariate input outside the supported correlation structure.
class StructureError : public DomainError {
public:
    using DomainError::DomainError;
};

// Forecaster observes all of S, so the forecast map degenerates.
class DegenerateForecasterError : public DomainError {
public:
    using DomainError::DomainError;
};

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double err_estimate)
        : std::runtime_error(what), err_estimate_(err_estimate) {}

    [[nodiscard]] double err_estimate() const noexcept { return err_estimate_; }

private:
    double err_estimate_;
};

}  // namespace fagg
