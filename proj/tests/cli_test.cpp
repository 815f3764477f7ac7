#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fagg/aggregators.hpp"
#include "fagg/format.hpp"

namespace fagg::cli {
namespace {

using Json = nlohmann::json;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::vector<std::vector<std::string>> parse_table(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::vector<std::string> cells;
        std::string cell;
        while (row >> cell) cells.push_back(cell);
        if (!cells.empty()) rows.push_back(cells);
    }
    return rows;
}

TEST(Cli, TableIsByteStable) {
    const auto r = run_cli({"table", "--p", "0.6", "--q", "0.8"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.err, "");
    EXPECT_EQ(r.out,
              "aggregator     value\n"
              "average        0.700\n"
              "probit         0.708\n"
              "fixed_rho_0.5  0.814\n"
              "bayes          0.833\n"
              "log_odds       0.857\n");
    EXPECT_EQ(run_cli({"table", "--p", "0.6", "--q", "0.8"}).out, r.out);
    EXPECT_EQ(run_cli({"table", "--p", "0.8", "--q", "0.6"}).out, r.out);
}

TEST(Cli, TableAtCenter) {
    const auto rows = parse_table(run_cli({"table", "--p", "0.5", "--q", "0.5"}).out);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "0.500");
}

TEST(Cli, AggregateExamples) {
    auto r = run_cli({"aggregate", "--method", "bayes", "--p", "0.6", "--q", "0.8"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.out, "0.833333\n");
    EXPECT_EQ(run_cli({"aggregate", "--method", "average", "--p", "0.5", "--q", "0.5"}).out,
              "0.500000\n");
    r = run_cli({"aggregate", "--method", "fixed-rho", "--rho", "0.5", "--p", "0.6", "--q", "0.8"});
    EXPECT_EQ(r.out.substr(0, 5), "0.814");
    EXPECT_EQ(run_cli({"--precision", "3", "aggregate", "--method", "logodds", "--p", "0.6", "--q",
                       "0.8"})
                  .out,
              "0.857\n");
    EXPECT_EQ(run_cli({"aggregate", "--method", "probit", "--p", "0.6", "--q", "0.8",
                       "--precision", "2"})
                  .out,
              "0.71\n");
}

TEST(Cli, UsageErrors) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"aggregate", "--method", "fixed-rho", "--p", "0.6", "--q", "0.8"},
             {"aggregate", "--method", "bayes", "--rho", "0.5", "--p", "0.6", "--q", "0.8"},
             {"aggregate", "--method", "median", "--p", "0.6", "--q", "0.8"},
             {"aggregate", "--method", "bayes", "--p", "0.6"},
             {"aggregate", "--method", "bayes", "--p", "abc", "--q", "0.8"},
             {"--format", "xml", "table", "--p", "0.6", "--q", "0.8"},
             {"--precision", "40", "table", "--p", "0.6", "--q", "0.8"},
             {"curves", "--mode", "spiral"},
             {"curves", "--samples", "1"},
             {"simulate", "--trials", "10", "--seed", "1"},
             {"simulate", "--trials", "10", "--seed", "1", "--rho", "0.5", "--prior"},
             {"simulate", "--trials", "10", "--rho", "0.5", "--report", "histogram"},
             {"posterior", "--p", "0.6", "--q", "0.8", "--grid", "1"},
         }) {
        const auto r = run_cli(args);
        EXPECT_EQ(r.code, kExitUsage) << ::testing::PrintToString(args);
        EXPECT_EQ(r.out, "") << ::testing::PrintToString(args);
        EXPECT_NE(r.err, "") << ::testing::PrintToString(args);
    }
}

TEST(Cli, DomainErrors) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"aggregate", "--method", "bayes", "--p", "0", "--q", "0.8"},
             {"aggregate", "--method", "bayes", "--p", "1", "--q", "0.8"},
             {"aggregate", "--method", "bayes", "--p", "1.2", "--q", "0.8"},
             {"aggregate", "--method", "fixed-rho", "--rho", "1.5", "--p", "0.6", "--q", "0.8"},
             {"table", "--p", "0.6", "--q", "-0.1"},
             {"marginal", "--beta", "0"},
             {"marginal", "--beta", "-2"},
             {"simulate", "--trials", "10", "--rho", "-0.5"},
             {"simulate", "--trials", "0", "--prior"},
             {"simulate", "--trials", "-5", "--prior"},
             {"posterior", "--p", "0.6", "--q", "1"},
         }) {
        const auto r = run_cli(args);
        EXPECT_EQ(r.code, kExitDomain) << ::testing::PrintToString(args);
        EXPECT_EQ(r.out, "") << ::testing::PrintToString(args);
        EXPECT_NE(r.err, "") << ::testing::PrintToString(args);
    }
    const auto r = run_cli({"aggregate", "--method", "bayes", "--p", "1", "--q", "0.8"});
    EXPECT_NE(r.err.find("clamp"), std::string::npos);
}

TEST(Cli, HelpIsSuccess) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("aggregate"), std::string::npos);
}

TEST(Cli, CsvAndJsonAgreeForAggregate) {
    const std::vector<std::string> base{"aggregate", "--method", "fixed-rho", "--rho", "0.3",
                                        "--p",       "0.15",     "--q",       "0.4"};
    auto csv_args = base, json_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    json_args.insert(json_args.end(), {"--format", "json"});
    const auto csv = parse_csv(run_cli(csv_args).out);
    const auto doc = Json::parse(run_cli(json_args).out);
    ASSERT_EQ(csv.size(), 2u);
    for (std::size_t j = 0; j < csv[0].size(); ++j) {
        const auto& key = csv[0][j];
        ASSERT_TRUE(doc.contains(key)) << key;
        if (doc[key].is_string()) {
            EXPECT_EQ(doc[key].get<std::string>(), csv[1][j]);
        } else {
            EXPECT_EQ(doc[key].get<double>(), std::stod(csv[1][j])) << key;
        }
    }
    EXPECT_NEAR(doc["value"].get<double>(),
                aggregate_fixed_rho({0.15, 0.4}, Overlap(0.3)), 5e-7);
}

// Compares a csv rendering with the "rows" array of the json rendering.
void expect_rows_identical(const std::vector<std::string>& args) {
    auto csv_args = args, json_args = args;
    csv_args.insert(csv_args.begin(), {"--format", "csv"});
    json_args.insert(json_args.begin(), {"--format", "json"});
    const auto csv_run = run_cli(csv_args);
    const auto json_run = run_cli(json_args);
    ASSERT_EQ(csv_run.code, kExitOk) << csv_run.err;
    ASSERT_EQ(json_run.code, kExitOk) << json_run.err;
    const auto csv = parse_csv(csv_run.out);
    const auto rows = Json::parse(json_run.out)["rows"];
    ASSERT_EQ(csv.size(), rows.size() + 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < csv[0].size(); ++j) {
            const auto& cell = rows[i][csv[0][j]];
            if (cell.is_string()) {
                EXPECT_EQ(cell.get<std::string>(), csv[i + 1][j]);
            } else {
                EXPECT_EQ(cell.get<double>(), std::stod(csv[i + 1][j]))
                    << csv[0][j] << " row " << i;
            }
        }
    }
}

TEST(Cli, CsvAndJsonAgreeForTabularCommands) {
    expect_rows_identical({"table", "--p", "0.3", "--q", "0.9"});
    expect_rows_identical({"curves", "--mode", "diagonal", "--samples", "11"});
    expect_rows_identical({"curves", "--mode", "offset", "--samples", "11"});
    expect_rows_identical({"marginal", "--beta", "3/7", "--samples", "9"});
    expect_rows_identical({"simulate", "--trials", "5000", "--seed", "4", "--prior", "--report",
                           "brier"});
    expect_rows_identical({"simulate", "--trials", "5000", "--seed", "4", "--rho", "0.4",
                           "--report", "calibration", "--bins", "10"});
}

TEST(Cli, CsvAndJsonAgreeForPosterior) {
    const auto csv = parse_csv(
        run_cli({"--format", "csv", "posterior", "--p", "0.3", "--q", "0.45", "--grid", "21"}).out);
    const auto doc = Json::parse(
        run_cli({"--format", "json", "posterior", "--p", "0.3", "--q", "0.45", "--grid", "21"})
            .out);
    ASSERT_EQ(csv.size(), 22u);
    ASSERT_EQ(doc["density"].size(), 21u);
    for (std::size_t i = 0; i < 21; ++i) {
        EXPECT_EQ(doc["density"][i][0].get<double>(), std::stod(csv[i + 1][0]));
        EXPECT_EQ(doc["density"][i][1].get<double>(), std::stod(csv[i + 1][1]));
        EXPECT_EQ(doc["weights"][i].get<double>(), std::stod(csv[i + 1][2]));
        EXPECT_EQ(doc["normalizing_constant"].get<double>(), std::stod(csv[i + 1][3]));
        EXPECT_EQ(doc["mean_rho"].get<double>(), std::stod(csv[i + 1][4]));
    }
}

TEST(Cli, CurvesDiagonal) {
    const auto rows = parse_csv(
        run_cli({"--format", "csv", "curves", "--mode", "diagonal", "--samples", "101"}).out);
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "average", "probit", "fixed_rho_half",
                                                 "bayes", "log_odds"}));
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(std::stod(rows[1][j]), 0.5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][1], rows[i][0]);
        EXPECT_EQ(rows[i][2], rows[i][0]);
    }
    const auto& at07 = rows[41];
    EXPECT_EQ(at07[0], "0.700000");
    EXPECT_NEAR(std::stod(at07[4]), (3 * 0.7 - 1) / 1.4, 5e-7);
    EXPECT_EQ(at07[4], "0.785714");
    EXPECT_EQ(at07[5], "0.844828");
    EXPECT_EQ(rows.back()[0], "1.000000");
}

TEST(Cli, CurvesOffset) {
    const auto rows = parse_csv(
        run_cli({"--format", "csv", "curves", "--mode", "offset", "--samples", "101",
                 "--precision", "12"})
            .out);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double p = std::stod(rows[i][0]);
        const ForecastPair pq(p, (1 + p) / 2);
        EXPECT_NEAR(std::stod(rows[i][1]), aggregate_average(pq), 1e-12);
        EXPECT_NEAR(std::stod(rows[i][2]), aggregate_probit(pq), 1e-12);
        EXPECT_NEAR(std::stod(rows[i][3]), aggregate_fixed_rho(pq, Overlap(0.5)), 1e-12);
        EXPECT_NEAR(std::stod(rows[i][4]), aggregate_bayes(pq), 1e-12);
        EXPECT_NEAR(std::stod(rows[i][5]), aggregate_log_odds(pq), 1e-12);
    }
}

TEST(Cli, Marginal) {
    auto rows = parse_csv(run_cli({"--format", "csv", "marginal", "--beta", "1"}).out);
    ASSERT_EQ(rows.size(), 102u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "density"}));
    EXPECT_EQ(rows[1][0], "0.004950");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "1.000000");

    rows = parse_csv(run_cli({"--format", "csv", "marginal", "--beta", "7/3"}).out);
    EXPECT_EQ(rows[51][0], "0.500000");
    EXPECT_EQ(rows[51][1], "0.654654");
    rows = parse_csv(run_cli({"--format", "csv", "marginal", "--beta", "3/7"}).out);
    EXPECT_EQ(rows[51][1], "1.527525");
    rows = parse_csv(run_cli({"--format", "csv", "marginal", "--beta", "0.4286"}).out);
    EXPECT_EQ(rows.size(), 102u);
}

TEST(Cli, SimulateRecordsAtFullOverlap) {
    const auto r = run_cli(
        {"--format", "csv", "simulate", "--trials", "100000", "--seed", "7", "--rho", "1",
         "--report", "records"});
    ASSERT_EQ(r.code, kExitOk);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 100001u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"rho", "p", "q", "outcome"}));
    for (std::size_t i = 1; i < rows.size(); ++i) ASSERT_EQ(rows[i][1], rows[i][2]);
}

TEST(Cli, SimulateRecordsJsonLines) {
    const auto r = run_cli({"--format", "json", "simulate", "--trials", "50", "--seed", "7",
                            "--rho", "0.2", "--report", "records"});
    std::istringstream in(r.out);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        const auto doc = Json::parse(line);
        EXPECT_EQ(doc["rho"].get<double>(), 0.2);
        EXPECT_TRUE(doc["outcome"] == 0 || doc["outcome"] == 1);
        ++n;
    }
    EXPECT_EQ(n, 50);
}

TEST(Cli, SimulateThreadsDoNotChangeOutput) {
    const std::vector<std::string> base{"--format", "csv", "simulate", "--trials", "20000",
                                        "--seed",   "9",   "--prior",  "--report", "brier"};
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "4"});
    EXPECT_EQ(run_cli(base).out, run_cli(threaded).out);
}

TEST(Cli, SimulateBrierBayesIsMinimal) {
    const auto rows = parse_csv(run_cli({"--format", "csv", "simulate", "--trials", "1000000",
                                         "--seed", "42", "--prior", "--report", "brier"})
                                    .out);
    ASSERT_EQ(rows.size(), 6u);
    std::map<std::string, double> score;
    for (std::size_t i = 1; i < rows.size(); ++i) score[rows[i][0]] = std::stod(rows[i][1]);
    for (const auto& [name, s] : score) {
        if (name != "bayes") {
            EXPECT_LT(score["bayes"], s) << name;
        }
    }
}

TEST(Cli, SimulateCalibrationFixedRhoWithinTolerance) {
    const auto rows = parse_csv(run_cli({"--format", "csv", "simulate", "--trials", "1000000",
                                         "--seed", "42", "--rho", "0.5", "--report",
                                         "calibration"})
                                    .out);
    ASSERT_EQ(rows[0].back(), "within_tolerance");
    int checked = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][0] != "fixed_rho_0.5") continue;
        EXPECT_EQ(rows[i].back(), "1") << rows[i][1];
        ++checked;
    }
    EXPECT_EQ(checked, 20);
}

TEST(Cli, PosteriorCenterIsIncreasing) {
    const auto doc = Json::parse(
        run_cli({"--format", "json", "--precision", "17", "posterior", "--p", "0.5", "--q", "0.5"})
            .out);
    const auto& d = doc["density"];
    ASSERT_EQ(d.size(), 1001u);
    for (std::size_t i = 1; i < d.size(); ++i) {
        EXPECT_GE(d[i][1].get<double>(), d[i - 1][1].get<double>());
    }
    EXPECT_GT(doc["mean_rho"].get<double>(), 0.5);
}

TEST(Cli, PosteriorNormalizedAndMixesToBayes) {
    for (auto [p, q] : {std::pair{0.6, 0.8}, std::pair{0.5, 0.5}, std::pair{0.2, 0.3}}) {
        const auto doc = Json::parse(run_cli({"--format", "json", "--precision", "17",
                                              "posterior", "--p", fmt::shortest(p), "--q",
                                              fmt::shortest(q)})
                                         .out);
        double mass = 0.0, mix = 0.0;
        for (std::size_t i = 0; i < doc["density"].size(); ++i) {
            const double rho = doc["density"][i][0].get<double>();
            const double f = doc["density"][i][1].get<double>();
            const double w = doc["weights"][i].get<double>();
            mass += f * w;
            mix += aggregate_fixed_rho({p, q}, Overlap(rho)) * f * w;
        }
        EXPECT_NEAR(mass, 1.0, 1e-6) << p << ' ' << q;
        EXPECT_NEAR(mix, aggregate_bayes({p, q}), 1e-4) << p << ' ' << q;
    }
}

TEST(Format, RoundingAndText) {
    EXPECT_EQ(fmt::fixed(0.8333333, 3), "0.833");
    EXPECT_EQ(fmt::fixed(0.0005, 3), "0.001");
    EXPECT_EQ(fmt::fixed(-0.0004, 3), "0.000");
    EXPECT_EQ(fmt::fixed(2.5, 0), "3");
    EXPECT_EQ(fmt::fixed(-2.5, 0), "-3");
    const auto big = fmt::fixed(1e200, 2);
    EXPECT_GT(big.size(), 200u);
    EXPECT_EQ(big.substr(big.size() - 3), ".00");
    EXPECT_EQ(fmt::round_half_away(1e300, 17), 1e300);
    EXPECT_EQ(fmt::shortest(0.1), "0.1");
    EXPECT_EQ(fmt::shortest(1e-12), "1e-12");
}

}  // namespace
}  // namespace fagg::cli
