#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "squab/benchmark.h"
#include "squab/cellulation.h"

namespace squab {

/// Code parameters and stabilizer measurement weights.
struct CodeReport {
    std::string name;
    std::size_t n = 0;
    std::int64_t k = 0;
    std::size_t num_vertices = 0;
    std::size_t num_edges = 0;
    std::size_t num_faces = 0;
    std::int64_t euler_characteristic = 0;
    /// weight -> count for X_v over non-open vertices.
    std::map<std::size_t, std::size_t> x_weights;
    /// weight -> count for Z_f over faces.
    std::map<std::size_t, std::size_t> z_weights;
    std::size_t open_boundary_edges = 0;
    std::size_t closed_boundary_edges = 0;
};

CodeReport make_code_report(const SurfaceCode& code);
std::string render_text(const CodeReport& report);
nlohmann::json to_json(const CodeReport& report);
nlohmann::json to_json(const ValidationReport& report);

/// `%.6g`-style formatting that ignores the C locale.
std::string format_float(double value);

inline constexpr const char* kCsvHeader =
    "code,p,trials,fail_any,fail_z,fail_x,rate_any,ci_lo,ci_hi,rate_z,rate_x,mean_weight";

/// Header line plus one row per point. `code` defaults to the result's name.
std::string render_csv(const SweepResult& result, const std::string& code = {});
/// Rows only, for concatenating several codes under one header.
std::string render_csv_rows(const SweepResult& result, const std::string& code);

/// Canonical JSON of a sweep: sorted keys, no timing information.
nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const SweepConfig& config);

/// Per-p winner across several sweeps sharing one configuration.
struct CompareRow {
    double p = 0.0;
    std::string best_code;
    double best_rate = 0.0;
    /// Winner's CI does not overlap any other code's CI.
    bool separated = false;
};

/// Throws std::invalid_argument unless all results share p grid and trials.
std::vector<CompareRow> compare_results(const std::vector<SweepResult>& results,
                                        const std::vector<std::string>& labels);
std::string render_compare_summary(const std::vector<CompareRow>& rows);

}  // namespace squab
