#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "squab/cellulation.h"
#include "squab/homology.h"
#include "squab/rng.h"

namespace squab {

/// Which logical errors count as failures.
enum class SweepMode : std::uint8_t { Both, ZOnly, XOnly };

std::string_view to_string(SweepMode m);
std::optional<SweepMode> parse_sweep_mode(std::string_view text);

struct SweepConfig {
    std::vector<double> p_values;
    std::uint64_t trials_per_point = 1;
    std::uint64_t master_seed = 0;
    SweepMode mode = SweepMode::Both;

    /// Throws std::invalid_argument unless p values are sorted, in [0, 1],
    /// and trials >= 1.
    void check() const;
    /// `steps` evenly spaced points from p_min to p_max inclusive.
    static std::vector<double> linear_grid(double p_min, double p_max, std::size_t steps);
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Estimated probability that an erasure is uncorrectable at one p.
struct PointResult {
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t fail_any = 0;
    std::uint64_t fail_z = 0;
    std::uint64_t fail_x = 0;
    /// Sum of erasure weights over all trials; kept exact for determinism.
    std::uint64_t total_erasure_weight = 0;

    double mean_erasure_weight() const;
    double rate_any() const;
    double rate_z() const;
    double rate_x() const;
    Interval ci_any() const;
    Interval ci_z() const;
    Interval ci_x() const;

    friend bool operator==(const PointResult&, const PointResult&) = default;
};

struct SweepResult {
    SweepConfig config;
    std::string name;
    std::size_t n = 0;
    std::int64_t k = 0;
    std::vector<PointResult> points;
    double wall_time_s = 0.0;
};

/// Thrown when a run is cancelled through RunOptions::cancel.
class Cancelled : public std::runtime_error {
public:
    Cancelled() : std::runtime_error("cancelled") {}
};

struct RunOptions {
    /// 0 picks default_workers().
    unsigned workers = 0;
    /// Incremented by completed trials when set.
    std::atomic<std::uint64_t>* progress = nullptr;
    /// Polled between trial chunks when set.
    const std::atomic<bool>* cancel = nullptr;
};

/// SQUAB_WORKERS when set to a positive integer, else hardware concurrency.
unsigned default_workers();

/// Sets each bit of `out` independently with probability p.
///
/// A bit is set when the next 64-bit draw is below ⌊p·2⁶⁴⌋; p = 1 sets every
/// bit without drawing.
void sample_erasure(std::size_t n, double p, TrialRng& rng, ErasurePattern& out);
ErasurePattern sample_erasure(std::size_t n, double p, TrialRng& rng);

/// Wilson score interval clamped to [0, 1].
Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double confidence = 0.95);

/// Runs `trials` erasures at probability p. Trial t draws from
/// TrialRng(trial_seed(master_seed, point_index, t)); counts are identical for
/// any worker count.
PointResult run_point(const ErasureChecker& checker, double p, std::uint64_t trials, std::uint64_t master_seed,
                      std::uint64_t point_index, SweepMode mode = SweepMode::Both, const RunOptions& options = {});

SweepResult run_sweep(const SurfaceCode& code, const SweepConfig& config, const RunOptions& options = {});

}  // namespace squab
