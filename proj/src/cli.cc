#include "squab/cli.h"

#include <csignal>
#include <iostream>
#include <map>
#include <optional>
#include <pthread.h>

#include "CLI11.hpp"
#include "squab/benchmark.h"
#include "squab/generators.h"
#include "squab/report.h"
#include "squab/service.h"
#include "squab/surface_io.h"

namespace squab {

namespace {

/// Bad arguments discovered after parsing (exit 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenOptions {
    std::uint32_t d = 3;
    std::string cells = "4x4";
    std::string sides = "closed";
    std::string top, bottom, left, right;
    std::vector<std::string> holes;
    std::string name;
    std::string output;
};

struct SweepOptions {
    double p_min = 0.0;
    double p_max = 1.0;
    std::size_t steps = 11;
    std::vector<double> p_values;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    std::string mode = "both";
    unsigned workers = 0;
    std::string format = "csv";
    std::string output;
};

struct ServeOptions {
    ServiceConfig config;
};

SideClass side_or(const std::string& text, SideClass fallback, const char* what) {
    if (text.empty()) {
        return fallback;
    }
    auto c = parse_side_class(text);
    if (!c) {
        throw UsageError(std::string("--") + what + " must be open or closed, got '" + text + "'");
    }
    return *c;
}

PlanarSpec planar_spec(const GenOptions& o) {
    PlanarSpec spec;
    try {
        std::tie(spec.cell_rows, spec.cell_cols) = parse_cells(o.cells);
        for (const std::string& h : o.holes) {
            spec.holes.push_back(parse_hole_spec(h));
        }
    } catch (const GeneratorError& err) {
        throw UsageError(err.what());
    }
    const SideClass sides = side_or(o.sides, SideClass::Closed, "sides");
    spec.top = side_or(o.top, sides, "top");
    spec.bottom = side_or(o.bottom, sides, "bottom");
    spec.left = side_or(o.left, sides, "left");
    spec.right = side_or(o.right, sides, "right");
    spec.name = o.name;
    return spec;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

int cmd_gen(const std::string& kind, const GenOptions& o, std::ostream& out, std::ostream& err) {
    SurfaceCode code;
    try {
        if (kind == "toric") {
            code = gen_toric(o.d);
        } else if (kind == "bk") {
            code = gen_bravyi_kitaev(o.d);
        } else {
            code = gen_planar(planar_spec(o));
        }
    } catch (const GeneratorError& e) {
        throw UsageError(e.what());
    }
    if (!o.name.empty()) {
        code.surface = code.surface.renamed(o.name);
    }
    emit(o.output, save_code(code), out);
    std::ostream& summary = o.output.empty() || o.output == "-" ? err : out;
    summary << "n=" << code.surface.num_qubits() << " k=" << logical_qubit_count(code) << '\n';
    return 0;
}

SurfaceCode load_code(const std::string& path, bool strict, std::ostream& err) {
    LoadedSurface loaded = load_surface_file(path, LoadOptions{strict});
    const ValidationReport report = validate(loaded.surface);
    if (!report.ok()) {
        err << path << ": invalid lattice (" << report.violations.size() << " violations)\n";
        for (const Violation& v : report.violations) {
            err << "  " << v.rule << ": " << v.element() << '\n';
        }
        throw InvalidSurface(report);
    }
    SurfaceCode code = loaded.to_code();
    if (!is_qubit_bijection(code.surface, code.dual)) {
        throw std::runtime_error(path + ": dual block does not pair primal and dual qubits one to one");
    }
    return code;
}

int cmd_info(const std::string& path, bool as_json, bool strict, std::ostream& out, std::ostream& err) {
    const CodeReport report = make_code_report(load_code(path, strict, err));
    if (as_json) {
        out << to_json(report).dump(2) << '\n';
    } else {
        out << render_text(report);
    }
    return 0;
}

SweepConfig sweep_config(const SweepOptions& o) {
    SweepConfig config;
    config.p_values = o.p_values.empty() ? SweepConfig::linear_grid(o.p_min, o.p_max, o.steps) : o.p_values;
    if (config.p_values.empty()) {
        throw UsageError("--steps must be at least 1");
    }
    config.trials_per_point = o.trials;
    config.master_seed = o.seed;
    auto mode = parse_sweep_mode(o.mode);
    if (!mode) {
        throw UsageError("--mode must be both, z_only or x_only");
    }
    config.mode = *mode;
    try {
        config.check();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return config;
}

int cmd_bench(const std::string& path, const SweepOptions& o, std::ostream& out, std::ostream& err) {
    const SweepConfig config = sweep_config(o);
    const SurfaceCode code = load_code(path, false, err);
    RunOptions run;
    run.workers = o.workers;
    const SweepResult result = run_sweep(code, config, run);
    emit(o.output, o.format == "json" ? to_json(result).dump(2) + "\n" : render_csv(result), out);
    err << result.name << ": " << result.points.size() << " points x " << config.trials_per_point
        << " trials in " << format_float(result.wall_time_s) << " s\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& paths, const SweepOptions& o, std::ostream& out,
                std::ostream& err) {
    if (paths.size() < 2) {
        throw UsageError("compare needs at least two lattice files");
    }
    const SweepConfig config = sweep_config(o);
    std::vector<SurfaceCode> codes;
    for (const std::string& path : paths) {
        codes.push_back(load_code(path, false, err));
    }
    std::vector<SweepResult> results;
    std::vector<std::string> labels;
    std::map<std::string, int> seen;
    RunOptions run;
    run.workers = o.workers;
    for (const SurfaceCode& code : codes) {
        results.push_back(run_sweep(code, config, run));
        const std::string& name = code.surface.name().empty() ? std::string("code") : code.surface.name();
        const int count = ++seen[name];
        labels.push_back(count == 1 ? name : name + "#" + std::to_string(count));
    }
    std::string text;
    if (o.format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            doc.push_back({{"label", labels[i]}, {"result", to_json(results[i])}});
        }
        text = doc.dump(2) + "\n";
    } else {
        text = std::string(kCsvHeader) + "\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            text += render_csv_rows(results[i], labels[i]);
        }
    }
    emit(o.output, text, out);
    err << render_compare_summary(compare_results(results, labels));
    return 0;
}

int cmd_serve(const ServiceConfig& config, std::ostream& out) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    Service service(config);
    const int port = service.start();
    out << "listening on http://" << config.host << ':' << port << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    out << "shutting down" << std::endl;
    service.stop();
    return 0;
}

void add_sweep_flags(CLI::App* cmd, SweepOptions& o) {
    cmd->add_option("--p-min", o.p_min, "Smallest erasure probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--p-max", o.p_max, "Largest erasure probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--steps", o.steps, "Number of evenly spaced p values")->check(CLI::Range(1, 100000));
    cmd->add_option("--p", o.p_values, "Explicit p values (overrides the grid)")->delimiter(',');
    cmd->add_option("--trials", o.trials, "Trials per p value")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--mode", o.mode, "Failure criterion")->check(CLI::IsMember({"both", "z_only", "x_only"}));
    cmd->add_option("--workers", o.workers, "Worker threads (0: SQUAB_WORKERS or all cores)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("-o,--output", o.output, "Output path (default: stdout)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Homological benchmarking of planar surface codes under erasure", "squab"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a lattice file");
    gen_cmd->require_subcommand(1);
    auto* gen_toric_cmd = gen_cmd->add_subcommand("toric", "Square lattice on the torus");
    auto* gen_bk_cmd = gen_cmd->add_subcommand("bk", "Planar code with two open and two closed sides");
    auto* gen_planar_cmd = gen_cmd->add_subcommand("planar", "Rectangular grid with chosen sides and holes");
    for (auto* cmd : {gen_toric_cmd, gen_bk_cmd}) {
        cmd->add_option("--d", gen.d, "Distance")->required()->check(CLI::Range(2u, 4096u));
    }
    gen_planar_cmd->add_option("--cells", gen.cells, "Face grid ROWSxCOLS")->required();
    gen_planar_cmd->add_option("--sides", gen.sides, "Class of every side: open or closed");
    gen_planar_cmd->add_option("--top", gen.top, "Top side class");
    gen_planar_cmd->add_option("--bottom", gen.bottom, "Bottom side class");
    gen_planar_cmd->add_option("--left", gen.left, "Left side class");
    gen_planar_cmd->add_option("--right", gen.right, "Right side class");
    gen_planar_cmd->add_option("--hole", gen.holes, "Hole ROW,COL,HxW:CLASS (repeatable)")->take_all();
    for (auto* cmd : {gen_toric_cmd, gen_bk_cmd, gen_planar_cmd}) {
        cmd->add_option("--name", gen.name, "Name stored in the file");
        cmd->add_option("-o,--output", gen.output, "Output path (default: stdout)");
    }

    std::string info_path;
    bool info_json = false;
    bool info_strict = false;
    auto* info_cmd = app.add_subcommand("info", "Print code parameters and stabilizer weights");
    info_cmd->add_option("file", info_path, "Lattice file")->required();
    info_cmd->add_flag("--json", info_json, "Machine-readable output");
    info_cmd->add_flag("--strict", info_strict, "Reject fields outside the file schema");

    std::string bench_path;
    SweepOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Estimate the uncorrectable-erasure probability over a p sweep");
    bench_cmd->add_option("file", bench_path, "Lattice file")->required();
    add_sweep_flags(bench_cmd, bench);

    std::vector<std::string> compare_paths;
    SweepOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "Run one sweep on several lattices");
    compare_cmd->add_option("files", compare_paths, "Lattice files")->required();
    add_sweep_flags(compare_cmd, compare);

    ServiceConfig serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run the local HTTP API");
    serve_cmd->add_option("--host", serve.host, "Listen address");
    serve_cmd->add_option("--port", serve.port, "Listen port (0: any free port)")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--trial-cap", serve.trial_cap, "Largest trials per point accepted")
        ->check(CLI::PositiveNumber);
    serve_cmd->add_option("--body-limit", serve.body_limit, "Largest request body in bytes")
        ->check(CLI::PositiveNumber);
    serve_cmd->add_option("--max-jobs", serve.max_concurrent_jobs, "Benchmark jobs running at once")
        ->check(CLI::PositiveNumber);
    serve_cmd->add_option("--workers", serve.workers_per_job, "Worker threads per job (0: default)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*gen_cmd) {
            const std::string kind = *gen_toric_cmd ? "toric" : *gen_bk_cmd ? "bk" : "planar";
            return cmd_gen(kind, gen, out, err);
        }
        if (*info_cmd) {
            return cmd_info(info_path, info_json, info_strict, out, err);
        }
        if (*bench_cmd) {
            return cmd_bench(bench_path, bench, out, err);
        }
        if (*compare_cmd) {
            return cmd_compare(compare_paths, compare, out, err);
        }
        return cmd_serve(serve, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what();
        if (!e.field().empty()) err << " (at " << e.field() << ")";
        if (e.line() != 0) err << " (line " << e.line() << ")";
        err << '\n';
        return 1;
    } catch (const InvalidSurface&) {
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace squab
