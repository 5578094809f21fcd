#include "squab/benchmark.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace squab {

std::string_view to_string(SweepMode m) {
    switch (m) {
        case SweepMode::Both:
            return "both";
        case SweepMode::ZOnly:
            return "z_only";
        case SweepMode::XOnly:
            return "x_only";
    }
    return "?";
}

std::optional<SweepMode> parse_sweep_mode(std::string_view text) {
    if (text == "both") return SweepMode::Both;
    if (text == "z_only") return SweepMode::ZOnly;
    if (text == "x_only") return SweepMode::XOnly;
    return std::nullopt;
}

void SweepConfig::check() const {
    if (trials_per_point < 1) {
        throw std::invalid_argument("trials per point must be at least 1");
    }
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        const double p = p_values[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("erasure probability " + std::to_string(p) + " outside [0, 1]");
        }
        if (i > 0 && p < p_values[i - 1]) {
            throw std::invalid_argument("p values must be sorted ascending");
        }
    }
}

std::vector<double> SweepConfig::linear_grid(double p_min, double p_max, std::size_t steps) {
    std::vector<double> grid;
    if (steps == 0) {
        return grid;
    }
    if (steps == 1) {
        return {p_min};
    }
    grid.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        grid.push_back(i + 1 == steps ? p_max
                                      : p_min + (p_max - p_min) * static_cast<double>(i) /
                                                    static_cast<double>(steps - 1));
    }
    return grid;
}

namespace {

double ratio(std::uint64_t a, std::uint64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

constexpr std::uint64_t kChunkTrials = 256;

struct Tally {
    std::uint64_t fail_any = 0;
    std::uint64_t fail_z = 0;
    std::uint64_t fail_x = 0;
    std::uint64_t weight = 0;
};

}  // namespace

double PointResult::mean_erasure_weight() const { return ratio(total_erasure_weight, trials); }
double PointResult::rate_any() const { return ratio(fail_any, trials); }
double PointResult::rate_z() const { return ratio(fail_z, trials); }
double PointResult::rate_x() const { return ratio(fail_x, trials); }
Interval PointResult::ci_any() const { return wilson_interval(fail_any, trials); }
Interval PointResult::ci_z() const { return wilson_interval(fail_z, trials); }
Interval PointResult::ci_x() const { return wilson_interval(fail_x, trials); }

unsigned default_workers() {
    if (const char* env = std::getenv("SQUAB_WORKERS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<unsigned>(value);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void sample_erasure(std::size_t n, double p, TrialRng& rng, ErasurePattern& out) {
    out.reset(n);
    if (p <= 0.0) {
        return;
    }
    if (p >= 1.0) {
        out = ErasurePattern::full(n);
        return;
    }
    const auto threshold = static_cast<std::uint64_t>(std::ldexp(p, 64));
    auto words = out.words();
    for (std::size_t q = 0; q < n; ++q) {
        if (rng.next() < threshold) {
            words[q >> 6] |= std::uint64_t{1} << (q & 63);
        }
    }
}

ErasurePattern sample_erasure(std::size_t n, double p, TrialRng& rng) {
    ErasurePattern out;
    sample_erasure(n, p, rng, out);
    return out;
}

Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double confidence) {
    if (trials == 0 || failures > trials) {
        throw std::invalid_argument("wilson_interval needs 0 <= failures <= trials and trials >= 1");
    }
    boost::math::normal standard;
    const double z = boost::math::quantile(standard, 0.5 + confidence / 2.0);
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    Interval out{std::clamp(center - half, 0.0, 1.0), std::clamp(center + half, 0.0, 1.0)};
    if (failures == 0) out.lo = 0.0;
    if (failures == trials) out.hi = 1.0;
    return out;
}

PointResult run_point(const ErasureChecker& checker, double p, std::uint64_t trials, std::uint64_t master_seed,
                      std::uint64_t point_index, SweepMode mode, const RunOptions& options) {
    const CheckSides sides = mode == SweepMode::Both    ? CheckSides::Both
                             : mode == SweepMode::ZOnly ? CheckSides::PrimalOnly
                                                        : CheckSides::DualOnly;
    const std::uint64_t num_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    const unsigned requested = options.workers == 0 ? default_workers() : options.workers;
    const auto workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(requested, num_chunks)));

    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<bool> stopped{false};
    std::vector<Tally> tallies(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&](unsigned worker) {
        try {
            CheckerWorkspace ws;
            ErasurePattern erasure;
            Tally& tally = tallies[worker];
            for (;;) {
                if (stopped.load(std::memory_order_relaxed) ||
                    (options.cancel != nullptr && options.cancel->load(std::memory_order_relaxed))) {
                    stopped = true;
                    return;
                }
                const std::uint64_t chunk = next_chunk.fetch_add(1, std::memory_order_relaxed);
                if (chunk >= num_chunks) {
                    return;
                }
                const std::uint64_t begin = chunk * kChunkTrials;
                const std::uint64_t end = std::min(trials, begin + kChunkTrials);
                for (std::uint64_t t = begin; t < end; ++t) {
                    TrialRng rng(trial_seed(master_seed, point_index, t));
                    sample_erasure(checker.num_qubits(), p, rng, erasure);
                    const Verdict v = checker.check(erasure, ws, sides);
                    const bool z = v.h1_primal.value > 0;
                    const bool x = v.h1_dual.value > 0;
                    tally.fail_z += z;
                    tally.fail_x += x;
                    tally.fail_any += (z || x);
                    tally.weight += erasure.weight();
                }
                if (options.progress != nullptr) {
                    options.progress->fetch_add(end - begin, std::memory_order_relaxed);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            failure = std::current_exception();
            stopped = true;
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    if (options.cancel != nullptr && options.cancel->load()) {
        throw Cancelled();
    }

    PointResult result;
    result.p = p;
    result.trials = trials;
    for (const Tally& t : tallies) {
        result.fail_any += t.fail_any;
        result.fail_z += t.fail_z;
        result.fail_x += t.fail_x;
        result.total_erasure_weight += t.weight;
    }
    return result;
}

SweepResult run_sweep(const SurfaceCode& code, const SweepConfig& config, const RunOptions& options) {
    config.check();
    const auto start = std::chrono::steady_clock::now();
    ErasureChecker checker(code);
    CheckerWorkspace ws;

    SweepResult result;
    result.config = config;
    result.name = code.surface.name();
    result.n = code.surface.num_qubits();
    result.k = checker.primal_h1(ErasurePattern::full(result.n), ws).value;
    result.points.reserve(config.p_values.size());
    for (std::size_t i = 0; i < config.p_values.size(); ++i) {
        result.points.push_back(
            run_point(checker, config.p_values[i], config.trials_per_point, config.master_seed, i, config.mode, options));
    }
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace squab
