#include "fagg/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <thread>

#include "fagg/errors.hpp"
#include "fagg/format.hpp"
#include "fagg/rng.hpp"
#include "fagg/special_functions.hpp"

namespace fagg {

Probability::Probability(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        throw DomainError("forecast must lie strictly inside (0, 1), got " +
                          fmt::shortest(value) + "; clamp boundary forecasts first");
    }
}

Overlap::Overlap(double rho) : rho_(rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw DomainError("overlap rho must lie in [0, 1], got " + fmt::shortest(rho));
    }
}

Beta::Beta(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError("beta must be positive and finite, got " + fmt::shortest(value));
    }
}

InformationStructure::InformationStructure(double total, double b1, double b2, double overlap)
    : total_(total), b1_(b1), b2_(b2), overlap_(overlap) {
    for (double v : {total, b1, b2, overlap}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("information measures must be finite and nonnegative");
        }
    }
    if (!(total > 0.0)) throw DomainError("|S| must be positive");
    if (b1 > total || b2 > total) throw DomainError("|B_i| cannot exceed |S|");
    if (overlap > std::min(b1, b2)) throw DomainError("overlap cannot exceed min(|B1|, |B2|)");
    if (overlap < b1 + b2 - total) throw DomainError("overlap below |B1| + |B2| - |S|");

    // Covariance of (X_S, X_B1, X_B2) is [[S, b1, b2], [b1, b1, o], [b2, o, b2]].
    const double det = total * (b1 * b2 - overlap * overlap) - b1 * (b1 * b2 - overlap * b2) +
                       b2 * (b1 * overlap - b1 * b2);
    if (det < -1e-12 * total * total * total) {
        throw DomainError("information structure covariance is not positive semidefinite");
    }
}

InformationStructure InformationStructure::two_forecaster(Overlap rho) {
    return {2.0, 1.0, 1.0, rho.value()};
}

InformationStructure InformationStructure::normalized() const {
    const double gamma = total_ / 2.0;
    return {2.0, b1_ / gamma, b2_ / gamma, overlap_ / gamma};
}

bool InformationStructure::is_symmetric_unit() const noexcept {
    return total_ == 2.0 && b1_ == 1.0 && b2_ == 1.0;
}

Beta InformationStructure::beta(Forecaster which) const {
    const double b = measure(which);
    if (!(b < total_)) {
        throw DegenerateForecasterError("forecaster observes all of S (|B| = |S|)");
    }
    return Beta(b / (total_ - b));
}

double clamp_forecast(double p) noexcept {
    return std::clamp(p, kForecastClamp, 1.0 - kForecastClamp);
}

Probability forecast_from_observation(double x, const InformationStructure& structure,
                                      Forecaster which) {
    const double b = structure.measure(which);
    if (!(b < structure.total())) {
        throw DegenerateForecasterError("forecaster observes all of S (|B| = |S|)");
    }
    return Probability(clamp_forecast(norm_cdf(x / std::sqrt(structure.total() - b))));
}

double marginal_density(double t, Beta beta) {
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("marginal_density needs 0 < t < 1");
    }
    const double b = beta.value();
    if (b == 1.0) return 1.0;
    const double z = norm_inv_cdf(t);
    // phi(z / sqrt(b)) / phi(z) folded into one exponent to avoid underflow.
    return std::exp(0.5 * z * z * (1.0 - 1.0 / b)) / std::sqrt(b);
}

namespace {

SimulationRecord draw_with(const CounterRng& rng, std::uint64_t index, double rho) {
    const std::uint64_t base = 8 * index;
    const auto [u, v] = rng.normal_pair(base);
    const auto [m, w] = rng.normal_pair(base + 2);
    const double private_sd = std::sqrt(1.0 - rho);
    const double shared_sd = std::sqrt(rho);

    const double x_b1 = private_sd * u + shared_sd * m;
    const double x_b2 = private_sd * v + shared_sd * m;
    const double x_s = x_b1 + private_sd * v + shared_sd * w;

    SimulationRecord rec;
    rec.rho = rho;
    rec.p = clamp_forecast(norm_cdf(x_b1));
    rec.q = clamp_forecast(norm_cdf(x_b2));
    rec.outcome = x_s >= 0.0;
    return rec;
}

template <typename Draw>
std::vector<SimulationRecord> run_trials(std::size_t trials, unsigned threads, Draw draw) {
    if (trials < 1) throw DomainError("simulation needs at least one trial");
    std::vector<SimulationRecord> out(trials);
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, trials);
    if (workers == 1) {
        for (std::size_t i = 0; i < trials; ++i) out[i] = draw(i);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(trials, lo + chunk);
        pool.emplace_back([&out, &draw, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = draw(i);
        });
    }
    pool.clear();  // join before `out` leaves scope
    return out;
}

}  // namespace

SimulationRecord draw_record(std::uint64_t seed, std::uint64_t index, double rho) {
    return draw_with(CounterRng(seed), index, Overlap(rho).value());
}

SimulationRecord draw_record_uniform_prior(std::uint64_t seed, std::uint64_t index) {
    const CounterRng rng(seed);
    return draw_with(rng, index, rng.uniform(8 * index + 4));
}

std::vector<SimulationRecord> simulate_fixed_rho(Overlap rho, std::size_t trials,
                                                 std::uint64_t seed, unsigned threads) {
    const CounterRng rng(seed);
    const double r = rho.value();
    return run_trials(trials, threads, [&](std::size_t i) { return draw_with(rng, i, r); });
}

std::vector<SimulationRecord> simulate_uniform_prior(std::size_t trials, std::uint64_t seed,
                                                     unsigned threads) {
    const CounterRng rng(seed);
    return run_trials(trials, threads, [&](std::size_t i) {
        return draw_with(rng, i, rng.uniform(8 * i + 4));
    });
}

void write_records_csv(std::ostream& out, std::span<const SimulationRecord> records) {
    out << "rho,p,q,outcome\n";
    for (const auto& r : records) {
        out << fmt::shortest(r.rho) << ',' << fmt::shortest(r.p) << ',' << fmt::shortest(r.q)
            << ',' << (r.outcome ? 1 : 0) << '\n';
    }
}

void write_records_jsonl(std::ostream& out, std::span<const SimulationRecord> records) {
    for (const auto& r : records) {
        out << "{\"rho\":" << fmt::shortest(r.rho) << ",\"p\":" << fmt::shortest(r.p)
            << ",\"q\":" << fmt::shortest(r.q) << ",\"outcome\":" << (r.outcome ? 1 : 0)
            << "}\n";
    }
}

}  // namespace fagg
