#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fagg/aggregators.hpp"
#include "fagg/model.hpp"

namespace fagg::scoring {

struct CalibrationBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double mean_prediction = 0.0;
    double frequency = 0.0;
    /// Binomial standard error sqrt(m (1 - m) / n) at the mean prediction m.
    double std_error = 0.0;
};

/// Equal-width bins on [0, 1]; a prediction of exactly 1 lands in the last bin.
std::vector<CalibrationBin> calibration_bins(std::span<const double> predictions,
                                             std::span<const SimulationRecord> records,
                                             std::size_t bins = 20);

/// |frequency - reference| <= max(floor, sigmas * std_error). Empty bins pass.
bool within_tolerance(const CalibrationBin& bin, double reference, double floor = 0.01,
                      double sigmas = 3.0);

struct MeanWithError {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Mean Brier score (g - 1_A)^2 and its standard error.
MeanWithError brier(std::span<const double> predictions,
                    std::span<const SimulationRecord> records);

/// Mean and standard error of the per-trial difference Brier(a) - Brier(b).
MeanWithError brier_difference(std::span<const double> a, std::span<const double> b,
                               std::span<const SimulationRecord> records);

std::vector<double> predictions(const AggregatorKind& kind,
                                std::span<const SimulationRecord> records);

/// The comparison set in report order: average, probit, fixed rho, bayes, log odds.
std::vector<AggregatorKind> comparison_set(Overlap fixed_rho);

}  // namespace fagg::scoring
