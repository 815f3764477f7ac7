#include "fagg/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fagg/errors.hpp"
#include "fagg/format.hpp"
#include "fagg/special_functions.hpp"

namespace fagg {

double aggregate_average(const ForecastPair& pair) {
    return 0.5 * (pair.p.value() + pair.q.value());
}

double aggregate_probit(const ForecastPair& pair) {
    return norm_cdf(0.5 * (norm_inv_cdf(pair.p.value()) + norm_inv_cdf(pair.q.value())));
}

double aggregate_log_odds(const ForecastPair& pair) {
    const double p = pair.p.value();
    const double q = pair.q.value();
    const double yes = p * q;
    return yes / (yes + (1.0 - p) * (1.0 - q));
}

double aggregate_fixed_rho(const ForecastPair& pair, Overlap rho) {
    const double sum = norm_inv_cdf(pair.p.value()) + norm_inv_cdf(pair.q.value());
    const double r = rho.value();
    if (r == 0.0) {
        if (sum > 0.0) return 1.0;
        if (sum < 0.0) return 0.0;
        return 0.5;
    }
    return norm_cdf(sum / std::sqrt(2.0 * r * (1.0 + r)));
}

double aggregate_bayes(const ForecastPair& pair) {
    const double lo = std::min(pair.p.value(), pair.q.value());
    const double hi = std::max(pair.p.value(), pair.q.value());
    // hi - 1 is exact for hi >= 1/2, so the numerator takes a single rounding.
    if (lo + hi >= 1.0) return ((hi - 1.0) + 2.0 * lo) / (2.0 * lo);
    return lo / (2.0 * (1.0 - hi));
}

AggregatorKind AggregatorKind::from_name(std::string_view name, std::optional<double> rho) {
    const bool wants_rho = name == "fixed-rho";
    if (wants_rho && !rho) throw std::invalid_argument("method fixed-rho requires --rho");
    if (!wants_rho && rho) {
        throw std::invalid_argument("--rho is only valid with method fixed-rho");
    }
    if (name == "average") return average();
    if (name == "probit") return probit();
    if (name == "logodds") return log_odds();
    if (name == "bayes") return bayes();
    if (wants_rho) return fixed_rho(Overlap(*rho));
    throw std::invalid_argument("unknown aggregation method '" + std::string(name) + "'");
}

std::string AggregatorKind::label() const {
    switch (method_) {
        case AggregatorMethod::Average: return "average";
        case AggregatorMethod::Probit: return "probit";
        case AggregatorMethod::LogOdds: return "log_odds";
        case AggregatorMethod::Bayes: return "bayes";
        case AggregatorMethod::FixedRho: return "fixed_rho_" + fmt::shortest(rho_->value());
    }
    return "unknown";
}

double aggregate(const AggregatorKind& kind, const ForecastPair& pair) {
    switch (kind.method()) {
        case AggregatorMethod::Average: return aggregate_average(pair);
        case AggregatorMethod::Probit: return aggregate_probit(pair);
        case AggregatorMethod::LogOdds: return aggregate_log_odds(pair);
        case AggregatorMethod::FixedRho: return aggregate_fixed_rho(pair, *kind.rho());
        case AggregatorMethod::Bayes: return aggregate_bayes(pair);
    }
    throw DomainError("unknown aggregator");
}

}  // namespace fagg
