#include "fagg/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "fagg/errors.hpp"

namespace fagg::scoring {
namespace {

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw DomainError("prediction and record counts differ");
}

MeanWithError summarize(double sum, double sum_sq, std::size_t n) {
    if (n == 0) throw DomainError("cannot summarize an empty sample");
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(n - 1));
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

double outcome(const SimulationRecord& r) { return r.outcome ? 1.0 : 0.0; }

}  // namespace

std::vector<CalibrationBin> calibration_bins(std::span<const double> predictions,
                                             std::span<const SimulationRecord> records,
                                             std::size_t bins) {
    require_same_size(predictions.size(), records.size());
    if (bins < 1) throw DomainError("calibration needs at least one bin");

    std::vector<CalibrationBin> out(bins);
    std::vector<double> pred_sum(bins, 0.0);
    std::vector<double> hits(bins, 0.0);
    const double width = 1.0 / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = static_cast<double>(b) * width;
        out[b].hi = static_cast<double>(b + 1) * width;
    }
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double g = std::clamp(predictions[i], 0.0, 1.0);
        const auto b = std::min(bins - 1, static_cast<std::size_t>(g * static_cast<double>(bins)));
        ++out[b].count;
        pred_sum[b] += g;
        hits[b] += outcome(records[i]);
    }
    for (std::size_t b = 0; b < bins; ++b) {
        auto& bin = out[b];
        if (bin.count == 0) continue;
        const auto n = static_cast<double>(bin.count);
        bin.mean_prediction = pred_sum[b] / n;
        bin.frequency = hits[b] / n;
        bin.std_error = std::sqrt(bin.mean_prediction * (1.0 - bin.mean_prediction) / n);
    }
    return out;
}

bool within_tolerance(const CalibrationBin& bin, double reference, double floor, double sigmas) {
    if (bin.count == 0) return true;
    return std::abs(bin.frequency - reference) <= std::max(floor, sigmas * bin.std_error);
}

MeanWithError brier(std::span<const double> predictions,
                    std::span<const SimulationRecord> records) {
    require_same_size(predictions.size(), records.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - outcome(records[i]);
        const double loss = d * d;
        sum += loss;
        sum_sq += loss * loss;
    }
    return summarize(sum, sum_sq, predictions.size());
}

MeanWithError brier_difference(std::span<const double> a, std::span<const double> b,
                               std::span<const SimulationRecord> records) {
    require_same_size(a.size(), records.size());
    require_same_size(b.size(), records.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double y = outcome(records[i]);
        const double diff = (a[i] - y) * (a[i] - y) - (b[i] - y) * (b[i] - y);
        sum += diff;
        sum_sq += diff * diff;
    }
    return summarize(sum, sum_sq, a.size());
}

std::vector<double> predictions(const AggregatorKind& kind,
                                std::span<const SimulationRecord> records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(aggregate(kind, ForecastPair(r.p, r.q)));
    return out;
}

std::vector<AggregatorKind> comparison_set(Overlap fixed_rho) {
    return {AggregatorKind::average(), AggregatorKind::probit(),
            AggregatorKind::fixed_rho(fixed_rho), AggregatorKind::bayes(),
            AggregatorKind::log_odds()};
}

}  // namespace fagg::scoring
