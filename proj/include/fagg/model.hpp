#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace fagg {

/// A forecast strictly inside (0, 1).
class Probability {
public:
    explicit Probability(double value);
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    double value_;
};

/// Information overlap rho = |B1 n B2| in [0, 1].
class Overlap {
public:
    explicit Overlap(double rho);
    [[nodiscard]] double value() const noexcept { return rho_; }

private:
    double rho_;
};

/// beta = |B| / (|S| - |B|) > 0.
class Beta {
public:
    explicit Beta(double value);
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    double value_;
};

struct ForecastPair {
    Probability p;
    Probability q;

    ForecastPair(Probability p_, Probability q_) : p(p_), q(q_) {}
    ForecastPair(double p_, double q_) : p(p_), q(q_) {}

    [[nodiscard]] ForecastPair swapped() const { return {q, p}; }
};

enum class Forecaster { First = 1, Second = 2 };

/// Measures (|S|, |B1|, |B2|, |B1 n B2|) of the Gaussian partial-information
/// model. Constructor enforces the set-measure constraints, which also make
/// the covariance of (X_S, X_B1, X_B2) positive semidefinite.
class InformationStructure {
public:
    InformationStructure(double total, double b1, double b2, double overlap);

    /// |S| = 2, |B1| = |B2| = 1, |B1 n B2| = rho.
    static InformationStructure two_forecaster(Overlap rho);

    [[nodiscard]] double total() const noexcept { return total_; }
    [[nodiscard]] double b1() const noexcept { return b1_; }
    [[nodiscard]] double b2() const noexcept { return b2_; }
    [[nodiscard]] double overlap() const noexcept { return overlap_; }
    [[nodiscard]] double measure(Forecaster which) const noexcept {
        return which == Forecaster::First ? b1_ : b2_;
    }

    /// Rescales every measure by 2 / |S| so that |S| = 2. Forecasts are
    /// invariant under this map.
    [[nodiscard]] InformationStructure normalized() const;

    /// True for |S| = 2, |B1| = |B2| = 1 (the structure the aggregators assume).
    [[nodiscard]] bool is_symmetric_unit() const noexcept;

    /// Beta of one forecaster; throws DegenerateForecasterError if |B| = |S|.
    [[nodiscard]] Beta beta(Forecaster which) const;

private:
    double total_;
    double b1_;
    double b2_;
    double overlap_;
};

struct SimulationRecord {
    double rho = 0.0;
    double p = 0.5;
    double q = 0.5;
    bool outcome = false;
};

/// Simulated forecasts are clamped into [kForecastClamp, 1 - kForecastClamp].
inline constexpr double kForecastClamp = 1e-12;

double clamp_forecast(double p) noexcept;

/// Phi(x / sqrt(|S| - |B|)): the calibrated forecast of a forecaster who saw
/// X_B = x. Clamped like simulated forecasts so the result is always a valid
/// Probability.
Probability forecast_from_observation(double x, const InformationStructure& structure,
                                      Forecaster which);

/// Density of a forecast whose law is Phi(sqrt(beta) * Z):
/// phi(Phi^-1(t) / sqrt(beta)) / (sqrt(beta) * phi(Phi^-1(t))).
double marginal_density(double t, Beta beta);

/// One draw of the fixed-overlap model at trial `index`. Uses the
/// decomposition X_B1 = U + M, X_B2 = V + M, X_S = U + V + M + W with
/// variances (1 - rho, 1 - rho, rho, rho).
SimulationRecord draw_record(std::uint64_t seed, std::uint64_t index, double rho);

/// One draw with rho ~ Uniform(0, 1) taken from the same trial's stream.
SimulationRecord draw_record_uniform_prior(std::uint64_t seed, std::uint64_t index);

/// Deterministic in (seed, trials); `threads` only partitions the index range.
std::vector<SimulationRecord> simulate_fixed_rho(Overlap rho, std::size_t trials,
                                                 std::uint64_t seed, unsigned threads = 1);

std::vector<SimulationRecord> simulate_uniform_prior(std::size_t trials, std::uint64_t seed,
                                                     unsigned threads = 1);

// Serialization: CSV header `rho,p,q,outcome`, LF endings; JSON lines with the
// same field order. Reals use the shortest round-trip representation.
void write_records_csv(std::ostream& out, std::span<const SimulationRecord> records);
void write_records_jsonl(std::ostream& out, std::span<const SimulationRecord> records);

}  // namespace fagg
