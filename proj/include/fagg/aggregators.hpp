#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fagg/model.hpp"

namespace fagg {

// Two-forecaster aggregators. All take forecasts strictly inside (0, 1).

/// (p + q) / 2.
double aggregate_average(const ForecastPair& pair);

/// Phi((Phi^-1(p) + Phi^-1(q)) / 2).
double aggregate_probit(const ForecastPair& pair);

/// Sum of log odds with prior 1/2: pq / (pq + (1 - p)(1 - q)).
double aggregate_log_odds(const ForecastPair& pair);

/// Best aggregator for known overlap rho:
/// Phi((Phi^-1(p) + Phi^-1(q)) / sqrt(2 rho (1 + rho))).
/// At rho = 0 returns the limit 0, 1/2 or 1 by the sign of the numerator.
double aggregate_fixed_rho(const ForecastPair& pair, Overlap rho);

/// Posterior-mean aggregator under a uniform prior on rho (a.k.a. the
/// revealed estimator). Piecewise rational; with lo = min(p, q), hi = max(p, q):
///   lo + hi >= 1:  (hi - (1 - 2 lo)) / (2 lo)
///   lo + hi <  1:  lo / (2 (1 - hi))
/// Both branches give 1/2 on lo + hi = 1 and the formula is symmetric by
/// construction.
double aggregate_bayes(const ForecastPair& pair);

enum class AggregatorMethod { Average, Probit, LogOdds, FixedRho, Bayes };

class AggregatorKind {
public:
    static AggregatorKind average() { return AggregatorKind(AggregatorMethod::Average); }
    static AggregatorKind probit() { return AggregatorKind(AggregatorMethod::Probit); }
    static AggregatorKind log_odds() { return AggregatorKind(AggregatorMethod::LogOdds); }
    static AggregatorKind bayes() { return AggregatorKind(AggregatorMethod::Bayes); }
    static AggregatorKind fixed_rho(Overlap rho) { return AggregatorKind(rho); }

    /// Parses a CLI method name (average, probit, logodds, fixed-rho, bayes).
    /// fixed-rho requires `rho`; every other method rejects it.
    static AggregatorKind from_name(std::string_view name, std::optional<double> rho);

    [[nodiscard]] AggregatorMethod method() const noexcept { return method_; }
    [[nodiscard]] std::optional<Overlap> rho() const noexcept { return rho_; }

    /// Column label, e.g. "bayes" or "fixed_rho_0.5".
    [[nodiscard]] std::string label() const;

private:
    explicit AggregatorKind(AggregatorMethod m) : method_(m) {}
    explicit AggregatorKind(Overlap rho) : method_(AggregatorMethod::FixedRho), rho_(rho) {}

    AggregatorMethod method_;
    std::optional<Overlap> rho_;
};

double aggregate(const AggregatorKind& kind, const ForecastPair& pair);

}  // namespace fagg
