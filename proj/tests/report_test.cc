#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.h"
#include "squab/generators.h"
#include "squab/report.h"

namespace squab {
namespace {

std::size_t total(const std::map<std::size_t, std::size_t>& h) {
    std::size_t sum = 0;
    for (auto [w, c] : h) {
        EXPECT_GE(w, 1u);
        sum += c;
    }
    return sum;
}

TEST(CodeReportTest, ToricWeightsAreFour) {
    const CodeReport r = make_code_report(gen_toric(3));
    EXPECT_EQ(r.n, 18u);
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.x_weights, (std::map<std::size_t, std::size_t>{{4, 9}}));
    EXPECT_EQ(r.z_weights, (std::map<std::size_t, std::size_t>{{4, 9}}));
}

TEST(CodeReportTest, BravyiKitaevHasBoundaryWeights) {
    const CodeReport r = make_code_report(gen_bravyi_kitaev(3));
    EXPECT_EQ(r.n, 13u);
    EXPECT_EQ(r.k, 1);
    EXPECT_TRUE(r.x_weights.count(3));
    EXPECT_TRUE(r.x_weights.count(4));
    EXPECT_EQ(r.open_boundary_edges, 4u);
    EXPECT_EQ(r.closed_boundary_edges, 6u);
}

TEST(CodeReportTest, HistogramsCountEveryStabilizer) {
    for (const auto& f : testing::oracle_corpus()) {
        const CodeReport r = make_code_report(f.code);
        EXPECT_EQ(total(r.x_weights), f.code.surface.num_nonopen_vertices()) << f.label;
        EXPECT_EQ(total(r.z_weights), f.code.surface.num_faces()) << f.label;
        EXPECT_EQ(r.n, f.code.surface.num_qubits());
    }
}

TEST(CodeReportTest, Rendering) {
    const CodeReport r = make_code_report(gen_bravyi_kitaev(3));
    const std::string text = render_text(r);
    EXPECT_NE(text.find("n = 13  k = 1"), std::string::npos);
    const nlohmann::json j = to_json(r);
    EXPECT_EQ(j["n"], 13);
    EXPECT_EQ(j["k"], 1);
    EXPECT_EQ(j["x_weights"], nlohmann::json::parse("[[3,4],[4,2]]"));
}

TEST(ValidationJson, ListsRules) {
    Surface s("bad", std::vector<bool>(3, false),
              {Edge{{0, 1}, BoundaryClass::Interior}, Edge{{1, 2}, BoundaryClass::ClosedBoundary},
               Edge{{2, 0}, BoundaryClass::ClosedBoundary}},
              {{0, 1, 2}});
    const nlohmann::json j = to_json(validate(s));
    EXPECT_EQ(j["ok"], false);
    EXPECT_EQ(j["violations"][0]["rule"], "incidence-degree");
    EXPECT_EQ(j["violations"][0]["element"], "edge 0");
}

TEST(FormatFloat, SixSignificantDigits) {
    EXPECT_EQ(format_float(0.0), "0");
    EXPECT_EQ(format_float(1.0), "1");
    EXPECT_EQ(format_float(0.1), "0.1");
    EXPECT_EQ(format_float(0.00382676), "0.00382676");
    EXPECT_EQ(format_float(2.0 / 3.0), "0.666667");
    EXPECT_EQ(format_float(1e-7), "1e-07");
}

SweepResult small_sweep(SweepMode mode = SweepMode::Both) {
    SweepConfig config;
    config.p_values = SweepConfig::linear_grid(0.0, 1.0, 11);
    config.trials_per_point = 1000;
    config.master_seed = 7;
    config.mode = mode;
    return run_sweep(gen_toric(3), config);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

TEST(Csv, SchemaAndEndpoints) {
    const auto rows = parse_csv(render_csv(small_sweep()));
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0], parse_csv(kCsvHeader)[0]);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 12u);
        EXPECT_EQ(rows[i][0], "toric-3");
        EXPECT_EQ(rows[i][2], "1000");
    }
    EXPECT_EQ(rows[1][1], "0");
    EXPECT_EQ(rows[1][6], "0");
    EXPECT_EQ(rows[11][1], "1");
    EXPECT_EQ(rows[11][6], "1");
}

TEST(Csv, ZOnlyHasNoXFailures) {
    const auto rows = parse_csv(render_csv(small_sweep(SweepMode::ZOnly)));
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][5], "0");
}

TEST(Csv, Deterministic) { EXPECT_EQ(render_csv(small_sweep()), render_csv(small_sweep())); }

TEST(SweepJson, CanonicalShape) {
    const SweepResult r = small_sweep();
    const nlohmann::json j = to_json(r);
    EXPECT_EQ(j["code"]["n"], 18);
    EXPECT_EQ(j["config"]["mode"], "both");
    EXPECT_EQ(j["points"].size(), 11u);
    EXPECT_FALSE(j.contains("wall_time_s"));
    EXPECT_EQ(j["points"][10]["rate_any"]["value"], 1.0);
    // Key order is sorted, so dumps are stable.
    const std::string dumped = j.dump();
    EXPECT_LT(dumped.find("\"code\""), dumped.find("\"config\""));
}

TEST(Compare, PicksLowestRateAndFlagsSeparation) {
    SweepConfig config;
    config.p_values = {0.3};
    config.trials_per_point = 4000;
    config.master_seed = 1;
    const SweepResult small = run_sweep(gen_toric(3), config);
    const SweepResult large = run_sweep(gen_toric(6), config);
    const auto rows = compare_results({small, large}, {"t3", "t6"});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].best_code, "t6");
    EXPECT_TRUE(rows[0].separated);
    const auto same = compare_results({small, small}, {"a", "b"});
    EXPECT_FALSE(same[0].separated);
    EXPECT_NE(render_compare_summary(rows).find("0.3,t6,"), std::string::npos);

    SweepConfig other = config;
    other.trials_per_point = 10;
    EXPECT_THROW(compare_results({small, run_sweep(gen_toric(3), other)}, {"a", "b"}), std::invalid_argument);
}

}  // namespace
}  // namespace squab
