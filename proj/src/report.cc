#include "squab/report.h"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "squab/homology.h"

namespace squab {

using nlohmann::json;

CodeReport make_code_report(const SurfaceCode& code) {
    const Surface& s = code.surface;
    CodeReport r;
    r.name = s.name();
    r.n = s.num_qubits();
    r.k = logical_qubit_count(code);
    r.num_vertices = s.num_vertices();
    r.num_edges = s.num_edges();
    r.num_faces = s.num_faces();
    r.euler_characteristic = euler_characteristic(s);

    std::vector<std::size_t> vertex_weight(s.num_vertices(), 0);
    for (const Edge& e : s.edges()) {
        switch (e.boundary) {
            case BoundaryClass::OpenBoundary:
                ++r.open_boundary_edges;
                continue;
            case BoundaryClass::ClosedBoundary:
                ++r.closed_boundary_edges;
                break;
            case BoundaryClass::Interior:
                break;
        }
        ++vertex_weight[e.ends[0]];
        if (e.ends[1] != e.ends[0]) {
            ++vertex_weight[e.ends[1]];
        }
    }
    for (std::uint32_t v = 0; v < s.num_vertices(); ++v) {
        if (!s.is_open(v)) {
            ++r.x_weights[vertex_weight[v]];
        }
    }
    for (const Face& f : s.faces()) {
        std::size_t w = 0;
        for (std::uint32_t e : f) {
            w += s.edge_qubit(e) != kNoQubit;
        }
        ++r.z_weights[w];
    }
    return r;
}

namespace {

std::string histogram_text(const std::map<std::size_t, std::size_t>& h) {
    std::string out;
    for (const auto& [weight, count] : h) {
        if (!out.empty()) out += ' ';
        out += std::to_string(weight) + ":" + std::to_string(count);
    }
    return out.empty() ? "-" : out;
}

json histogram_json(const std::map<std::size_t, std::size_t>& h) {
    json arr = json::array();
    for (const auto& [weight, count] : h) {
        arr.push_back({weight, count});
    }
    return arr;
}

json interval_json(double value, Interval ci) { return {{"value", value}, {"lo", ci.lo}, {"hi", ci.hi}}; }

}  // namespace

std::string render_text(const CodeReport& r) {
    std::ostringstream out;
    out << "code: " << r.name << '\n'
        << "n = " << r.n << "  k = " << r.k << '\n'
        << "cells: " << r.num_vertices << " vertices, " << r.num_edges << " edges, " << r.num_faces
        << " faces (euler characteristic " << r.euler_characteristic << ")\n"
        << "boundary: " << r.closed_boundary_edges << " closed edges, " << r.open_boundary_edges << " open edges\n"
        << "X-stabilizer weights (weight:count): " << histogram_text(r.x_weights) << '\n'
        << "Z-stabilizer weights (weight:count): " << histogram_text(r.z_weights) << '\n';
    return out.str();
}

json to_json(const CodeReport& r) {
    return {{"name", r.name},
            {"n", r.n},
            {"k", r.k},
            {"num_vertices", r.num_vertices},
            {"num_edges", r.num_edges},
            {"num_faces", r.num_faces},
            {"euler_characteristic", r.euler_characteristic},
            {"x_weights", histogram_json(r.x_weights)},
            {"z_weights", histogram_json(r.z_weights)},
            {"boundary", {{"open_edges", r.open_boundary_edges}, {"closed_edges", r.closed_boundary_edges}}}};
}

json to_json(const ValidationReport& report) {
    json violations = json::array();
    for (const Violation& v : report.violations) {
        violations.push_back({{"rule", v.rule}, {"element", v.element()}});
    }
    return {{"ok", report.ok()}, {"violations", violations}};
}

std::string format_float(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 6);
    if (ec != std::errc{}) {
        throw std::runtime_error("float formatting failed");
    }
    return std::string(buf.data(), end);
}

std::string render_csv_rows(const SweepResult& result, const std::string& code) {
    std::ostringstream out;
    for (const PointResult& pt : result.points) {
        const Interval ci = pt.ci_any();
        out << code << ',' << format_float(pt.p) << ',' << pt.trials << ',' << pt.fail_any << ',' << pt.fail_z << ','
            << pt.fail_x << ',' << format_float(pt.rate_any()) << ',' << format_float(ci.lo) << ','
            << format_float(ci.hi) << ',' << format_float(pt.rate_z()) << ',' << format_float(pt.rate_x()) << ','
            << format_float(pt.mean_erasure_weight()) << '\n';
    }
    return out.str();
}

std::string render_csv(const SweepResult& result, const std::string& code) {
    return std::string(kCsvHeader) + "\n" + render_csv_rows(result, code.empty() ? result.name : code);
}

json to_json(const SweepConfig& config) {
    return {{"p_values", config.p_values},
            {"trials_per_point", config.trials_per_point},
            {"master_seed", config.master_seed},
            {"mode", to_string(config.mode)}};
}

json to_json(const SweepResult& result) {
    json points = json::array();
    for (const PointResult& pt : result.points) {
        points.push_back({{"p", pt.p},
                          {"trials", pt.trials},
                          {"fail_any", pt.fail_any},
                          {"fail_z", pt.fail_z},
                          {"fail_x", pt.fail_x},
                          {"mean_erasure_weight", pt.mean_erasure_weight()},
                          {"rate_any", interval_json(pt.rate_any(), pt.ci_any())},
                          {"rate_z", interval_json(pt.rate_z(), pt.ci_z())},
                          {"rate_x", interval_json(pt.rate_x(), pt.ci_x())}});
    }
    return {{"code", {{"name", result.name}, {"n", result.n}, {"k", result.k}}},
            {"config", to_json(result.config)},
            {"metric", "probability that the erasure is uncorrectable"},
            {"points", points}};
}

std::vector<CompareRow> compare_results(const std::vector<SweepResult>& results,
                                        const std::vector<std::string>& labels) {
    if (results.size() != labels.size()) {
        throw std::invalid_argument("one label per result required");
    }
    if (results.empty()) {
        return {};
    }
    for (const SweepResult& r : results) {
        if (r.config.p_values != results[0].config.p_values ||
            r.config.trials_per_point != results[0].config.trials_per_point) {
            throw std::invalid_argument("compared sweeps must share p values and trial counts");
        }
    }
    std::vector<CompareRow> rows;
    for (std::size_t i = 0; i < results[0].points.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < results.size(); ++c) {
            if (results[c].points[i].rate_any() < results[best].points[i].rate_any()) {
                best = c;
            }
        }
        const Interval best_ci = results[best].points[i].ci_any();
        bool separated = results.size() > 1;
        for (std::size_t c = 0; c < results.size(); ++c) {
            if (c != best && results[c].points[i].ci_any().lo <= best_ci.hi) {
                separated = false;
            }
        }
        rows.push_back({results[0].points[i].p, labels[best], results[best].points[i].rate_any(), separated});
    }
    return rows;
}

std::string render_compare_summary(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "p,best_code,best_rate_any,separated\n";
    for (const CompareRow& row : rows) {
        out << format_float(row.p) << ',' << row.best_code << ',' << format_float(row.best_rate) << ','
            << (row.separated ? "yes" : "no") << '\n';
    }
    return out.str();
}

}  // namespace squab
