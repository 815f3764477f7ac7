#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fagg/aggregators.hpp"
#include "fagg/errors.hpp"
#include "fagg/format.hpp"
#include "fagg/model.hpp"
#include "fagg/oracle.hpp"
#include "fagg/scoring.hpp"

namespace fagg::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Table, Csv, Json };

using Cell = std::variant<std::string, double, std::int64_t>;

struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json meta = Json::object();
    // JSON renders the single row as the top-level object.
    bool flat = false;
};

struct GlobalOptions {
    std::string format = "table";
    int precision = 6;

    [[nodiscard]] OutputFormat output_format() const {
        if (format == "csv") return OutputFormat::Csv;
        if (format == "json") return OutputFormat::Json;
        return OutputFormat::Table;
    }
};

std::string cell_text(const Cell& c, int precision) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return fmt::fixed(*d, precision);
    return std::to_string(std::get<std::int64_t>(c));
}

Json cell_json(const Cell& c, int precision) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) {
        const double v = fmt::round_half_away(*d, precision);
        return v == 0.0 ? 0.0 : v;
    }
    return std::get<std::int64_t>(c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

void render(const Report& report, OutputFormat format, int precision, std::ostream& out) {
    switch (format) {
        case OutputFormat::Csv: {
            for (std::size_t j = 0; j < report.columns.size(); ++j) {
                out << (j ? "," : "") << csv_field(report.columns[j]);
            }
            out << '\n';
            for (const auto& row : report.rows) {
                for (std::size_t j = 0; j < row.size(); ++j) {
                    out << (j ? "," : "") << csv_field(cell_text(row[j], precision));
                }
                out << '\n';
            }
            return;
        }
        case OutputFormat::Json: {
            Json doc = report.meta;
            auto row_json = [&](const std::vector<Cell>& row) {
                Json obj = Json::object();
                for (std::size_t j = 0; j < row.size(); ++j) {
                    obj[report.columns[j]] = cell_json(row[j], precision);
                }
                return obj;
            };
            if (report.flat && report.rows.size() == 1) {
                const Json fields = row_json(report.rows.front());
                for (const auto& [k, v] : fields.items()) doc[k] = v;
            } else {
                Json rows = Json::array();
                for (const auto& row : report.rows) rows.push_back(row_json(row));
                doc["rows"] = std::move(rows);
            }
            out << doc.dump() << '\n';
            return;
        }
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> text;
            text.push_back(report.columns);
            for (const auto& row : report.rows) {
                std::vector<std::string> line;
                for (const auto& c : row) line.push_back(cell_text(c, precision));
                text.push_back(std::move(line));
            }
            std::vector<std::size_t> width(report.columns.size(), 0);
            for (const auto& line : text) {
                for (std::size_t j = 0; j < line.size(); ++j) {
                    width[j] = std::max(width[j], line[j].size());
                }
            }
            for (const auto& line : text) {
                for (std::size_t j = 0; j < line.size(); ++j) {
                    out << line[j];
                    if (j + 1 < line.size()) out << std::string(width[j] - line[j].size() + 2, ' ');
                }
                out << '\n';
            }
            return;
        }
    }
}

ForecastPair read_pair(double p, double q) { return {Probability(p), Probability(q)}; }

double parse_ratio(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) {
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            const std::string num = text.substr(0, slash);
            const std::string den = text.substr(slash + 1);
            std::size_t used_den = 0;
            value = std::stod(num, &used) / std::stod(den, &used_den);
            if (used != num.size() || used_den != den.size()) throw std::invalid_argument(text);
        }
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse number '" + text + "'");
    }
    return value;
}

// Column set shared by `table`, `curves` and `simulate`.
struct Comparison {
    std::string label;
    AggregatorKind kind;
};

std::vector<Comparison> comparison_columns(Overlap fixed) {
    std::vector<Comparison> out;
    for (const auto& kind : scoring::comparison_set(fixed)) out.push_back({kind.label(), kind});
    return out;
}

// ---- commands ------------------------------------------------------------

struct AggregateArgs {
    std::string method;
    double p = 0.0;
    double q = 0.0;
    std::optional<double> rho;
};

Report cmd_aggregate(const AggregateArgs& a, OutputFormat format) {
    AggregatorKind kind = [&] {
        try {
            return AggregatorKind::from_name(a.method, a.rho);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    const ForecastPair pair = read_pair(a.p, a.q);
    const double value = aggregate(kind, pair);

    Report r;
    if (format == OutputFormat::Table) {
        r.columns = {"value"};
        r.rows = {{value}};
        return r;
    }
    r.flat = true;
    r.columns = {"method", "p", "q"};
    std::vector<Cell> row{a.method, a.p, a.q};
    if (a.rho) {
        r.columns.emplace_back("rho");
        row.emplace_back(*a.rho);
    }
    r.columns.emplace_back("value");
    row.emplace_back(value);
    r.rows.push_back(std::move(row));
    return r;
}

Report cmd_table(double p, double q) {
    const ForecastPair pair = read_pair(p, q);
    Report r;
    r.meta["p"] = p;
    r.meta["q"] = q;
    r.columns = {"aggregator", "value"};
    for (const auto& c : comparison_columns(Overlap(0.5))) {
        r.rows.push_back({c.label, aggregate(c.kind, pair)});
    }
    return r;
}

Report cmd_curves(const std::string& mode, int samples) {
    if (samples < 2) throw UsageError("--samples must be at least 2");
    const bool diagonal = mode == "diagonal";
    Report r;
    r.meta["mode"] = mode;
    r.columns = {"x", "average", "probit", "fixed_rho_half", "bayes", "log_odds"};
    const auto columns = comparison_columns(Overlap(0.5));
    for (int i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? 1.0 : 0.5 + 0.5 * i / static_cast<double>(samples - 1);
        std::vector<Cell> row{x};
        if (x >= 1.0) {
            // Every aggregator tends to 1 as both forecasts tend to 1.
            for (std::size_t j = 0; j < columns.size(); ++j) row.emplace_back(1.0);
        } else {
            const ForecastPair pair(x, diagonal ? x : 0.5 * (1.0 + x));
            for (const auto& c : columns) row.emplace_back(aggregate(c.kind, pair));
        }
        r.rows.push_back(std::move(row));
    }
    return r;
}

Report cmd_marginal(const std::string& beta_text, int samples) {
    if (samples < 2) throw UsageError("--samples must be at least 2");
    const Beta beta(parse_ratio(beta_text));
    Report r;
    r.meta["beta"] = beta.value();
    r.columns = {"t", "density"};
    for (int i = 0; i < samples; ++i) {
        const double t = (i + 0.5) / samples;
        r.rows.push_back({t, marginal_density(t, beta)});
    }
    return r;
}

struct SimulateArgs {
    std::int64_t trials = 100000;
    std::uint64_t seed = 42;
    std::optional<double> rho;
    bool prior = false;
    std::string report = "brier";
    int bins = 20;
    unsigned threads = 1;
};

void cmd_simulate(const SimulateArgs& a, const GlobalOptions& g, std::ostream& out) {
    if (a.rho.has_value() == a.prior) throw UsageError("give exactly one of --rho or --prior");
    if (a.trials < 1) throw DomainError("simulation needs at least one trial");
    if (a.bins < 1) throw UsageError("--bins must be positive");
    const auto trials = static_cast<std::size_t>(a.trials);

    const auto records = a.prior ? simulate_uniform_prior(trials, a.seed, a.threads)
                                 : simulate_fixed_rho(Overlap(*a.rho), trials, a.seed, a.threads);
    const OutputFormat format = g.output_format();

    if (a.report == "records") {
        if (format == OutputFormat::Json) {
            write_records_jsonl(out, records);
        } else if (format == OutputFormat::Csv) {
            write_records_csv(out, records);
        } else {
            out << "rho p q outcome\n";
            for (const auto& rec : records) {
                out << fmt::shortest(rec.rho) << ' ' << fmt::shortest(rec.p) << ' '
                    << fmt::shortest(rec.q) << ' ' << (rec.outcome ? 1 : 0) << '\n';
            }
        }
        return;
    }

    const auto columns = comparison_columns(Overlap(a.rho.value_or(0.5)));
    std::vector<std::vector<double>> preds;
    for (const auto& c : columns) preds.push_back(scoring::predictions(c.kind, records));

    Report r;
    r.meta["trials"] = a.trials;
    r.meta["seed"] = a.seed;
    if (a.rho) r.meta["rho"] = *a.rho;
    else r.meta["prior"] = "uniform";

    if (a.report == "brier") {
        const std::size_t bayes = 3;
        r.columns = {"aggregator", "mean_brier", "std_error", "diff_vs_bayes", "paired_std_error",
                     "unpaired_std_error"};
        const auto base = scoring::brier(preds[bayes], records);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const auto score = scoring::brier(preds[j], records);
            const auto diff = scoring::brier_difference(preds[j], preds[bayes], records);
            const double unpaired = j == bayes ? 0.0
                                               : std::sqrt(score.std_error * score.std_error +
                                                           base.std_error * base.std_error);
            r.rows.push_back({columns[j].label, score.mean, score.std_error, diff.mean,
                              diff.std_error, unpaired});
        }
    } else {
        r.columns = {"aggregator", "bin_lo", "bin_hi", "count", "expected", "frequency",
                     "std_error", "within_tolerance"};
        for (std::size_t j = 0; j < columns.size(); ++j) {
            for (const auto& bin : scoring::calibration_bins(preds[j], records,
                                                             static_cast<std::size_t>(a.bins))) {
                r.rows.push_back({columns[j].label, bin.lo, bin.hi,
                                  static_cast<std::int64_t>(bin.count), bin.mean_prediction,
                                  bin.frequency, bin.std_error,
                                  static_cast<std::int64_t>(
                                      scoring::within_tolerance(bin, bin.mean_prediction))});
            }
        }
    }
    render(r, format, g.precision, out);
}

void cmd_posterior(double p, double q, int grid, const GlobalOptions& g, std::ostream& out) {
    if (grid < 2) throw UsageError("--grid must be at least 2");
    const auto summary = oracle::posterior_of_rho(read_pair(p, q), static_cast<std::size_t>(grid));
    const int prec = g.precision;
    switch (g.output_format()) {
        case OutputFormat::Json: {
            Json doc;
            doc["normalizing_constant"] = fmt::round_half_away(summary.normalizing_constant, prec);
            doc["mean_rho"] = fmt::round_half_away(summary.mean_rho, prec);
            Json density = Json::array();
            Json weights = Json::array();
            for (const auto& s : summary.density_samples) {
                density.push_back(
                    {fmt::round_half_away(s.rho, prec), fmt::round_half_away(s.density, prec)});
                weights.push_back(fmt::round_half_away(s.weight, prec));
            }
            doc["density"] = std::move(density);
            // d(rho) quadrature weights of the (non-uniform) rho grid.
            doc["weights"] = std::move(weights);
            out << doc.dump() << '\n';
            return;
        }
        case OutputFormat::Csv: {
            Report r;
            r.columns = {"rho", "density", "weight", "normalizing_constant", "mean_rho"};
            for (const auto& s : summary.density_samples) {
                r.rows.push_back({s.rho, s.density, s.weight, summary.normalizing_constant,
                                  summary.mean_rho});
            }
            render(r, OutputFormat::Csv, prec, out);
            return;
        }
        case OutputFormat::Table: {
            out << "normalizing_constant  " << fmt::fixed(summary.normalizing_constant, prec) << '\n'
                << "mean_rho              " << fmt::fixed(summary.mean_rho, prec) << "\n\n";
            Report r;
            r.columns = {"rho", "density", "weight"};
            for (const auto& s : summary.density_samples) {
                r.rows.push_back({s.rho, s.density, s.weight});
            }
            render(r, OutputFormat::Table, prec, out);
            return;
        }
    }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-forecaster probability aggregation under the Gaussian partial-information model",
                 "fagg"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--precision", global.precision, "Decimal places for reals")
        ->check(CLI::Range(0, 17));

    AggregateArgs agg;
    auto* aggregate_cmd = app.add_subcommand("aggregate", "Aggregate two forecasts");
    aggregate_cmd->add_option("--method", agg.method, "average|probit|logodds|fixed-rho|bayes")
        ->required()
        ->check(CLI::IsMember({"average", "probit", "logodds", "fixed-rho", "bayes"}));
    aggregate_cmd->add_option("--p", agg.p, "First forecast")->required();
    aggregate_cmd->add_option("--q", agg.q, "Second forecast")->required();
    aggregate_cmd->add_option("--rho", agg.rho, "Overlap for fixed-rho");

    double table_p = 0.0;
    double table_q = 0.0;
    auto* table_cmd = app.add_subcommand("table", "Compare all five aggregators (3 decimals)");
    table_cmd->add_option("--p", table_p, "First forecast")->required();
    table_cmd->add_option("--q", table_q, "Second forecast")->required();

    std::string curve_mode = "diagonal";
    int curve_samples = 101;
    auto* curves_cmd = app.add_subcommand("curves", "Aggregator curves on [1/2, 1]");
    curves_cmd->add_option("--mode", curve_mode, "diagonal (p = q = x) or offset (q = (1 + p)/2)")
        ->check(CLI::IsMember({"diagonal", "offset"}));
    curves_cmd->add_option("--samples", curve_samples, "Grid points, endpoints included");

    std::string beta_text;
    int marginal_samples = 101;
    auto* marginal_cmd = app.add_subcommand("marginal", "Marginal density of one forecast");
    marginal_cmd->add_option("--beta", beta_text, "beta = |B| / (|S| - |B|), e.g. 7/3")->required();
    marginal_cmd->add_option("--samples", marginal_samples, "Midpoint grid size on (0, 1)");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo calibration and Brier scores");
    simulate_cmd->add_option("--trials", sim.trials, "Number of simulated trials");
    simulate_cmd->add_option("--seed", sim.seed, "Generator seed");
    simulate_cmd->add_option("--rho", sim.rho, "Fixed overlap");
    simulate_cmd->add_flag("--prior", sim.prior, "Draw rho uniformly on [0, 1] per trial");
    simulate_cmd->add_option("--report", sim.report, "calibration|brier|records")
        ->check(CLI::IsMember({"calibration", "brier", "records"}));
    simulate_cmd->add_option("--bins", sim.bins, "Calibration bins");
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads");

    double post_p = 0.0;
    double post_q = 0.0;
    int post_grid = 1001;
    auto* posterior_cmd = app.add_subcommand("posterior", "Posterior of the overlap given (p, q)");
    posterior_cmd->add_option("--p", post_p, "First forecast")->required();
    posterior_cmd->add_option("--q", post_q, "Second forecast")->required();
    posterior_cmd->add_option("--grid", post_grid, "Density samples");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("fagg");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const OutputFormat format = global.output_format();
        if (*aggregate_cmd) {
            const Report r = cmd_aggregate(agg, format);
            if (format == OutputFormat::Table) {
                out << cell_text(r.rows.front().front(), global.precision) << '\n';
            } else {
                render(r, format, global.precision, out);
            }
        } else if (*table_cmd) {
            render(cmd_table(table_p, table_q), format, 3, out);
        } else if (*curves_cmd) {
            render(cmd_curves(curve_mode, curve_samples), format, global.precision, out);
        } else if (*marginal_cmd) {
            render(cmd_marginal(beta_text, marginal_samples), format, global.precision, out);
        } else if (*simulate_cmd) {
            cmd_simulate(sim, global, out);
        } else if (*posterior_cmd) {
            cmd_posterior(post_p, post_q, post_grid, global, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ConvergenceError& e) {
        err << "numerical error: " << e.what() << " (error estimate " << e.err_estimate() << ")\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

}  // namespace fagg::cli
