#include "squab/service.h"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <list>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <regex>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "squab/benchmark.h"
#include "squab/generators.h"
#include "squab/report.h"
#include "squab/surface_io.h"

namespace squab {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

/// Client error carrying an HTTP status and a JSON body.
struct ApiError {
    int status;
    json body;
};

ApiError api_error(int status, const std::string& message) { return {status, {{"error", message}}}; }

json format_violation(const FormatError& err) {
    json v = {{"rule", err.code()}, {"element", err.field()}, {"message", err.what()}};
    if (err.line() != 0) {
        v["line"] = err.line();
    }
    return v;
}

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", kJson);
}

/// Parses a body that must be a cellulation file. Syntax errors are 400;
/// other format errors are returned as violations.
std::optional<LoadedSurface> parse_lattice(std::string_view payload, json& format_violations) {
    try {
        return load_surface(payload);
    } catch (const FormatError& err) {
        if (err.code() == "syntax") {
            throw api_error(400, std::string("malformed JSON: ") + err.what());
        }
        format_violations.push_back(format_violation(err));
        return std::nullopt;
    }
}

SideClass side_param(const std::function<std::optional<std::string>(const std::string&)>& get,
                     const std::string& key, SideClass fallback) {
    auto text = get(key);
    if (!text) {
        return fallback;
    }
    auto c = parse_side_class(*text);
    if (!c) {
        throw GeneratorError(key + " must be 'open' or 'closed', got '" + *text + "'");
    }
    return *c;
}

std::uint32_t uint_param(const std::function<std::optional<std::string>(const std::string&)>& get,
                         const std::string& key) {
    auto text = get(key);
    if (!text) {
        throw GeneratorError("missing parameter " + key);
    }
    try {
        std::size_t used = 0;
        const unsigned long value = std::stoul(*text, &used);
        if (used != text->size() || value > 0xFFFFu || (*text)[0] == '-') {
            throw std::out_of_range(key);
        }
        return static_cast<std::uint32_t>(value);
    } catch (const std::logic_error&) {
        throw GeneratorError("parameter " + key + " must be a small non-negative integer, got '" + *text + "'");
    }
}

/// Builds a generated code from named string parameters; `holes` are
/// ROW,COL,HxW:CLASS strings.
SurfaceCode generate(const std::string& kind,
                     const std::function<std::optional<std::string>(const std::string&)>& get,
                     const std::vector<std::string>& holes) {
    if (kind == "toric") {
        return gen_toric(uint_param(get, "d"));
    }
    if (kind == "bk") {
        return gen_bravyi_kitaev(uint_param(get, "d"));
    }
    if (kind != "planar") {
        throw GeneratorError("unknown generator '" + kind + "'");
    }
    PlanarSpec spec;
    if (auto cells = get("cells")) {
        std::tie(spec.cell_rows, spec.cell_cols) = parse_cells(*cells);
    } else {
        spec.cell_rows = uint_param(get, "rows");
        spec.cell_cols = uint_param(get, "cols");
    }
    const SideClass sides = side_param(get, "sides", SideClass::Closed);
    spec.top = side_param(get, "top", sides);
    spec.bottom = side_param(get, "bottom", sides);
    spec.left = side_param(get, "left", sides);
    spec.right = side_param(get, "right", sides);
    for (const std::string& h : holes) {
        spec.holes.push_back(parse_hole_spec(h));
    }
    if (auto name = get("name")) {
        spec.name = *name;
    }
    return gen_planar(spec);
}

SurfaceCode generate_from_json(const json& ref) {
    if (!ref.is_object() || !ref.contains("kind") || !ref["kind"].is_string()) {
        throw GeneratorError("generator needs a string 'kind'");
    }
    auto get = [&ref](const std::string& key) -> std::optional<std::string> {
        if (!ref.contains(key)) return std::nullopt;
        const json& v = ref[key];
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    std::vector<std::string> holes;
    if (ref.contains("holes")) {
        if (!ref["holes"].is_array()) {
            throw GeneratorError("'holes' must be an array of strings");
        }
        for (const json& h : ref["holes"]) {
            if (!h.is_string()) {
                throw GeneratorError("'holes' must be an array of strings");
            }
            holes.push_back(h.get<std::string>());
        }
    }
    return generate(ref["kind"].get<std::string>(), get, holes);
}

template <typename T>
T field_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw api_error(422, std::string("sweep field '") + key + "' has the wrong type");
    }
}

SweepConfig sweep_from_json(const json& sweep, std::uint64_t trial_cap) {
    if (!sweep.is_object()) {
        throw api_error(422, "'sweep' must be an object");
    }
    SweepConfig config;
    if (sweep.contains("p_values")) {
        config.p_values = field_or<std::vector<double>>(sweep, "p_values", {});
    } else {
        const auto steps = field_or<std::int64_t>(sweep, "steps", 11);
        if (steps < 1 || steps > 10'000) {
            throw api_error(422, "'steps' must be between 1 and 10000");
        }
        config.p_values = SweepConfig::linear_grid(field_or<double>(sweep, "p_min", 0.0),
                                                   field_or<double>(sweep, "p_max", 1.0),
                                                   static_cast<std::size_t>(steps));
    }
    if (config.p_values.empty()) {
        throw api_error(422, "sweep needs at least one p value");
    }
    const auto trials = field_or<std::int64_t>(sweep, "trials", 1000);
    if (trials < 1) {
        throw api_error(422, "'trials' must be at least 1");
    }
    if (static_cast<std::uint64_t>(trials) > trial_cap) {
        throw api_error(422, "'trials' exceeds the server cap of " + std::to_string(trial_cap));
    }
    config.trials_per_point = static_cast<std::uint64_t>(trials);
    config.master_seed = field_or<std::uint64_t>(sweep, "seed", 0);
    const auto mode = field_or<std::string>(sweep, "mode", "both");
    auto parsed = parse_sweep_mode(mode);
    if (!parsed) {
        throw api_error(422, "'mode' must be both, z_only or x_only");
    }
    config.mode = *parsed;
    try {
        config.check();
    } catch (const std::invalid_argument& err) {
        throw api_error(422, err.what());
    }
    return config;
}

std::string random_id() {
    std::random_device rd;
    std::uniform_int_distribution<std::uint32_t> dist;
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id;
    for (int i = 0; i < 4; ++i) {
        std::uint32_t word = dist(rd);
        for (int j = 0; j < 8; ++j) {
            id += kHex[word & 0xF];
            word >>= 4;
        }
    }
    return id;
}

bool is_local_origin(const std::string& origin) {
    static const std::regex pattern(R"(^https?://(localhost|127\.0\.0\.1|\[::1\])(:\d+)?$)");
    return std::regex_match(origin, pattern);
}

json openapi_document() {
    auto op = [](const char* summary, json responses) { return json{{"summary", summary}, {"responses", responses}}; };
    auto id_param = json::array({{{"name", "id"}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}}});
    json paths;
    paths["/api/lattices/validate"]["post"] =
        op("Check a cellulation file against the structural axioms",
           {{"200", {{"description", "validation report"}}}, {"400", {{"description", "malformed JSON"}}},
            {"413", {{"description", "body too large"}}}});
    paths["/api/lattices/info"]["post"] =
        op("Code parameters and stabilizer weight histograms",
           {{"200", {{"description", "code report"}}}, {"400", {{"description", "malformed JSON"}}},
            {"422", {{"description", "invalid lattice, with violations"}}}});
    paths["/api/benchmarks"]["post"] =
        op("Submit a sweep: {lattice | generator, sweep}",
           {{"202", {{"description", "job accepted, body {id}"}}}, {"422", {{"description", "invalid request"}}}});
    paths["/api/benchmarks/{id}"]["get"] =
        op("Job state and progress", {{"200", {{"description", "job"}}}, {"404", {{"description", "unknown id"}}}});
    paths["/api/benchmarks/{id}"]["get"]["parameters"] = id_param;
    paths["/api/benchmarks/{id}"]["delete"] =
        op("Cancel a queued or running job, or forget a finished one",
           {{"200", {{"description", "job after cancellation or deletion"}}}, {"404", {{"description", "unknown id"}}}});
    paths["/api/benchmarks/{id}"]["delete"]["parameters"] = id_param;
    paths["/api/benchmarks/{id}/result"]["get"] =
        op("Sweep result as canonical JSON, or CSV with format=csv",
           {{"200", {{"description", "sweep result"}}}, {"404", {{"description", "unknown id"}}},
            {"409", {{"description", "job not done"}}}});
    paths["/api/benchmarks/{id}/result"]["get"]["parameters"] = id_param;
    for (const char* kind : {"toric", "bk", "planar"}) {
        paths[std::string("/api/generators/") + kind]["get"] =
            op("Generated cellulation file with dual block",
               {{"200", {{"description", "cellulation file"}}}, {"422", {{"description", "bad parameters"}}}});
    }
    paths["/api/spec"]["get"] = op("This document", {{"200", {{"description", "OpenAPI document"}}}});
    return {{"openapi", "3.0.3"}, {"info", {{"title", "squab", "version", "1.0"}}}, {"paths", paths}};
}

}  // namespace

struct Service::Impl {
    enum class State { Queued, Running, Done, Failed };

    struct Job {
        std::string id;
        SurfaceCode code;
        SweepConfig config;
        std::uint64_t total = 0;
        std::atomic<std::uint64_t> completed{0};
        std::atomic<bool> cancel{false};
        // Guarded by Impl::mutex.
        State state = State::Queued;
        std::string error;
        std::optional<SweepResult> result;
    };

    struct Runner {
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> finished;
    };

    explicit Impl(ServiceConfig c) : config(std::move(c)) {}

    ServiceConfig config;
    httplib::Server server;
    int bound_port = -1;
    std::thread listener;

    std::mutex mutex;
    std::condition_variable slot_freed;
    std::map<std::string, std::shared_ptr<Job>> jobs;
    std::list<Runner> runners;
    std::size_t running = 0;
    bool shutting_down = false;

    static const char* state_name(State s) {
        switch (s) {
            case State::Queued:
                return "queued";
            case State::Running:
                return "running";
            case State::Done:
                return "done";
            case State::Failed:
                return "failed";
        }
        return "?";
    }

    json job_json(const Job& job) const {
        const std::uint64_t completed = std::min(job.completed.load(), job.total);
        return {{"id", job.id},
                {"state", state_name(job.state)},
                {"progress", {{"completed", job.state == State::Done ? job.total : completed}, {"total", job.total}}},
                {"error", job.error.empty() ? json(nullptr) : json(job.error)},
                {"wall_time_s", job.result ? json(job.result->wall_time_s) : json(nullptr)}};
    }

    void run_job(const std::shared_ptr<Job>& job) {
        {
            std::unique_lock lock(mutex);
            slot_freed.wait(lock, [&] {
                return shutting_down || job->cancel.load() || running < config.max_concurrent_jobs;
            });
            if (shutting_down || job->cancel.load() || job->state != State::Queued) {
                if (job->state == State::Queued) {
                    job->state = State::Failed;
                    job->error = "cancelled";
                }
                return;
            }
            job->state = State::Running;
            ++running;
        }
        RunOptions options;
        options.workers = config.workers_per_job;
        options.progress = &job->completed;
        options.cancel = &job->cancel;
        std::optional<SweepResult> result;
        std::string error;
        try {
            result = run_sweep(job->code, job->config, options);
        } catch (const Cancelled&) {
            error = "cancelled";
        } catch (const std::exception& err) {
            error = err.what();
        }
        std::lock_guard lock(mutex);
        --running;
        slot_freed.notify_all();
        if (job->state != State::Running) {
            return;
        }
        if (result) {
            job->result = std::move(result);
            job->state = State::Done;
        } else {
            job->state = State::Failed;
            job->error = error;
        }
    }

    void reap_finished_runners() {
        for (auto it = runners.begin(); it != runners.end();) {
            if (it->finished->load()) {
                it->thread.join();
                it = runners.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::string submit(SurfaceCode code, SweepConfig config_in) {
        auto job = std::make_shared<Job>();
        job->code = std::move(code);
        job->config = std::move(config_in);
        job->total = job->config.trials_per_point * job->config.p_values.size();
        std::lock_guard lock(mutex);
        if (shutting_down) {
            throw api_error(503, "server is shutting down");
        }
        reap_finished_runners();
        do {
            job->id = random_id();
        } while (jobs.count(job->id) != 0);
        jobs[job->id] = job;
        auto finished = std::make_shared<std::atomic<bool>>(false);
        runners.push_back({std::thread([this, job, finished] {
                               run_job(job);
                               finished->store(true);
                           }),
                           finished});
        return job->id;
    }

    std::shared_ptr<Job> find(const std::string& id) {
        auto it = jobs.find(id);
        if (it == jobs.end()) {
            throw api_error(404, "no job with id '" + id + "'");
        }
        return it->second;
    }

    SurfaceCode code_for_request(const json& body) {
        const bool has_lattice = body.contains("lattice");
        const bool has_generator = body.contains("generator");
        if (has_lattice == has_generator) {
            throw api_error(422, "request needs exactly one of 'lattice' or 'generator'");
        }
        if (has_generator) {
            try {
                return generate_from_json(body["generator"]);
            } catch (const GeneratorError& err) {
                throw api_error(422, err.what());
            }
        }
        json format_violations = json::array();
        const json& lattice = body["lattice"];
        auto loaded = parse_lattice(lattice.is_string() ? lattice.get<std::string>() : lattice.dump(), format_violations);
        if (!loaded) {
            throw ApiError{422, {{"error", "lattice does not follow the file format"}, {"violations", format_violations}}};
        }
        const ValidationReport report = validate(loaded->surface);
        if (!report.ok()) {
            throw ApiError{422, {{"error", "invalid lattice"}, {"violations", to_json(report)["violations"]}}};
        }
        SurfaceCode code = loaded->to_code();
        if (!is_qubit_bijection(code.surface, code.dual)) {
            throw api_error(422, "dual block does not pair primal and dual qubits one to one");
        }
        return code;
    }

    void handle_validate(const httplib::Request& req, httplib::Response& res) {
        json format_violations = json::array();
        auto loaded = parse_lattice(req.body, format_violations);
        if (!loaded) {
            send(res, 200, {{"ok", false}, {"violations", format_violations}});
            return;
        }
        send(res, 200, to_json(validate(loaded->surface)));
    }

    void handle_info(const httplib::Request& req, httplib::Response& res) {
        json format_violations = json::array();
        auto loaded = parse_lattice(req.body, format_violations);
        if (!loaded) {
            send(res, 422, {{"error", "lattice does not follow the file format"}, {"violations", format_violations}});
            return;
        }
        const ValidationReport report = validate(loaded->surface);
        if (!report.ok()) {
            send(res, 422, {{"error", "invalid lattice"}, {"violations", to_json(report)["violations"]}});
            return;
        }
        SurfaceCode code = loaded->to_code();
        if (!is_qubit_bijection(code.surface, code.dual)) {
            throw api_error(422, "dual block does not pair primal and dual qubits one to one");
        }
        send(res, 200, to_json(make_code_report(code)));
    }

    void handle_submit(const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error& err) {
            throw api_error(400, std::string("malformed JSON: ") + err.what());
        }
        if (!body.is_object()) {
            throw api_error(422, "request body must be an object");
        }
        if (!body.contains("sweep")) {
            throw api_error(422, "request needs a 'sweep' object");
        }
        SweepConfig sweep = sweep_from_json(body["sweep"], config.trial_cap);
        SurfaceCode code = code_for_request(body);
        const std::string id = submit(std::move(code), std::move(sweep));
        res.set_header("Location", "/api/benchmarks/" + id);
        send(res, 202, {{"id", id}});
    }

    void handle_job(const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(mutex);
        send(res, 200, job_json(*find(req.matches[1])));
    }

    void handle_result(const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(mutex);
        auto job = find(req.matches[1]);
        if (job->state != State::Done) {
            throw ApiError{409, {{"error", "job is not done"}, {"state", state_name(job->state)}}};
        }
        const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
        if (format == "csv") {
            res.status = 200;
            res.set_content(render_csv(*job->result), "text/csv");
        } else if (format == "json") {
            send(res, 200, to_json(*job->result));
        } else {
            throw api_error(422, "format must be json or csv");
        }
    }

    void handle_delete(const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(mutex);
        auto job = find(req.matches[1]);
        if (job->state == State::Queued || job->state == State::Running) {
            job->cancel = true;
            job->state = State::Failed;
            job->error = "cancelled";
            slot_freed.notify_all();
            send(res, 200, job_json(*job));
            return;
        }
        json body = job_json(*job);
        jobs.erase(job->id);
        body["deleted"] = true;
        send(res, 200, body);
    }

    void handle_generator(const httplib::Request& req, httplib::Response& res) {
        const std::string kind = req.matches[1];
        auto get = [&req](const std::string& key) -> std::optional<std::string> {
            if (!req.has_param(key)) return std::nullopt;
            return req.get_param_value(key);
        };
        std::vector<std::string> holes;
        for (std::size_t i = 0; i < req.get_param_value_count("hole"); ++i) {
            holes.push_back(req.get_param_value("hole", i));
        }
        try {
            SurfaceCode code = generate(kind, get, holes);
            res.status = 200;
            res.set_content(save_code(code), kJson);
        } catch (const GeneratorError& err) {
            throw api_error(kind == "toric" || kind == "bk" || kind == "planar" ? 422 : 404, err.what());
        }
    }

    using Handler = void (Impl::*)(const httplib::Request&, httplib::Response&);

    httplib::Server::Handler wrap(Handler h) {
        return [this, h](const httplib::Request& req, httplib::Response& res) {
            try {
                (this->*h)(req, res);
            } catch (const ApiError& err) {
                send(res, err.status, err.body);
            } catch (const InvalidSurface& err) {
                send(res, 422, {{"error", "invalid lattice"}, {"violations", to_json(err.report())["violations"]}});
            } catch (const std::invalid_argument& err) {
                send(res, 422, {{"error", err.what()}});
            }
        };
    }

    void install_routes() {
        server.set_payload_max_length(config.body_limit);
        server.Post("/api/lattices/validate", wrap(&Impl::handle_validate));
        server.Post("/api/lattices/info", wrap(&Impl::handle_info));
        server.Post("/api/benchmarks", wrap(&Impl::handle_submit));
        server.Get(R"(/api/benchmarks/([0-9a-zA-Z]+))", wrap(&Impl::handle_job));
        server.Delete(R"(/api/benchmarks/([0-9a-zA-Z]+))", wrap(&Impl::handle_delete));
        server.Get(R"(/api/benchmarks/([0-9a-zA-Z]+)/result)", wrap(&Impl::handle_result));
        server.Get(R"(/api/generators/([a-z]+))", wrap(&Impl::handle_generator));
        server.Get("/api/spec", [](const httplib::Request&, httplib::Response& res) {
            send(res, 200, openapi_document());
        });
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
            const std::string origin = req.get_header_value("Origin");
            if (!origin.empty() && is_local_origin(origin)) {
                res.set_header("Access-Control-Allow-Origin", origin);
                res.set_header("Vary", "Origin");
                res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
            }
        });
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                const char* reason = res.status == 413 ? "request body too large" : httplib::status_message(res.status);
                send(res, res.status, {{"error", reason}});
            }
        });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& err) {
                what = err.what();
            } catch (...) {
            }
            send(res, 500, {{"error", what}});
        });
    }

    void shutdown_jobs() {
        std::list<Runner> pending;
        {
            std::lock_guard lock(mutex);
            shutting_down = true;
            for (auto& [id, job] : jobs) {
                job->cancel = true;
            }
            slot_freed.notify_all();
            pending.swap(runners);
        }
        for (Runner& r : pending) {
            r.thread.join();
        }
    }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) { impl_->install_routes(); }

Service::~Service() { stop(); }

int Service::bind() {
    const int port = impl_->config.port == 0 ? impl_->server.bind_to_any_port(impl_->config.host)
                                             : (impl_->server.bind_to_port(impl_->config.host, impl_->config.port)
                                                    ? impl_->config.port
                                                    : -1);
    if (port < 0) {
        throw std::runtime_error("cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
    }
    impl_->bound_port = port;
    return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

int Service::start() {
    const int port = bind();
    impl_->listener = std::thread([this] { listen(); });
    impl_->server.wait_until_ready();
    return port;
}

void Service::stop() {
    if (!impl_) {
        return;
    }
    impl_->server.stop();
    if (impl_->listener.joinable()) {
        impl_->listener.join();
    }
    impl_->shutdown_jobs();
}

int Service::port() const { return impl_->bound_port; }

const ServiceConfig& Service::config() const { return impl_->config; }

}  // namespace squab
