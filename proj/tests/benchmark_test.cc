#include <gtest/gtest.h>

#include <cmath>

#include "squab/benchmark.h"
#include "squab/generators.h"
#include "squab/report.h"

namespace squab {
namespace {

TEST(Rng, TrialSeedsAreDistinctAndStable) {
    EXPECT_EQ(trial_seed(1, 2, 3), trial_seed(1, 2, 3));
    EXPECT_NE(trial_seed(1, 2, 3), trial_seed(1, 2, 4));
    EXPECT_NE(trial_seed(1, 2, 3), trial_seed(1, 3, 3));
    EXPECT_NE(trial_seed(1, 2, 3), trial_seed(2, 2, 3));
    // SplitMix64 reference output for seed 0.
    TrialRng rng(0);
    EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFull);
    EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ull);
}

TEST(SampleErasure, Endpoints) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        TrialRng a(seed), b(seed);
        EXPECT_EQ(sample_erasure(37, 0.0, a).weight(), 0u);
        EXPECT_EQ(sample_erasure(37, 1.0, b).weight(), 37u);
    }
}

TEST(SampleErasure, MeanWeightIsBinomial) {
    const std::size_t n = 18;
    const double p = 0.5;
    const int samples = 100000;
    double total = 0;
    ErasurePattern e;
    for (int i = 0; i < samples; ++i) {
        TrialRng rng(trial_seed(99, 0, static_cast<std::uint64_t>(i)));
        sample_erasure(n, p, rng, e);
        total += static_cast<double>(e.weight());
    }
    const double mean = total / samples;
    const double sigma_of_mean = std::sqrt(n * p * (1 - p) / samples);
    EXPECT_NEAR(mean, 9.0, 3 * sigma_of_mean);
}

TEST(Wilson, ClosedFormValues) {
    const Interval none = wilson_interval(0, 100);
    EXPECT_EQ(none.lo, 0.0);
    EXPECT_NEAR(none.hi, 0.0370, 5e-5);
    const Interval all = wilson_interval(100, 100);
    EXPECT_EQ(all.hi, 1.0);
    EXPECT_NEAR(all.lo, 0.9630, 5e-5);
    const Interval half = wilson_interval(50, 100);
    EXPECT_NEAR(half.lo + half.hi, 1.0, 1e-12);
    EXPECT_NEAR(half.lo, 0.4038, 5e-5);
    EXPECT_THROW(wilson_interval(3, 2), std::invalid_argument);
    EXPECT_THROW(wilson_interval(0, 0), std::invalid_argument);
}

TEST(RunPoint, Endpoints) {
    const SurfaceCode code = gen_toric(3);
    ErasureChecker checker(code);
    const PointResult zero = run_point(checker, 0.0, 1000, 5, 0);
    EXPECT_EQ(zero.fail_any, 0u);
    const PointResult one = run_point(checker, 1.0, 1000, 5, 0);
    EXPECT_EQ(one.fail_any, 1000u);
    EXPECT_EQ(one.fail_z, 1000u);
    EXPECT_EQ(one.fail_x, 1000u);
    EXPECT_DOUBLE_EQ(one.mean_erasure_weight(), 18.0);
}

TEST(RunPoint, SameAcrossWorkerCounts) {
    const SurfaceCode code = gen_toric(3);
    ErasureChecker checker(code);
    RunOptions one;
    one.workers = 1;
    const PointResult reference = run_point(checker, 0.5, 10000, 42, 0, SweepMode::Both, one);
    for (unsigned workers : {4u, 16u}) {
        RunOptions opts;
        opts.workers = workers;
        EXPECT_EQ(run_point(checker, 0.5, 10000, 42, 0, SweepMode::Both, opts), reference) << workers;
    }
}

TEST(RunPoint, CountInvariants) {
    const SurfaceCode code = gen_bravyi_kitaev(4);
    ErasureChecker checker(code);
    for (double p : {0.1, 0.3, 0.5, 0.7}) {
        const PointResult r = run_point(checker, p, 2000, 11, 1);
        EXPECT_LE(r.fail_z, r.fail_any);
        EXPECT_LE(r.fail_x, r.fail_any);
        EXPECT_LE(r.fail_any, r.fail_z + r.fail_x);
        for (auto [rate, ci] : {std::pair{r.rate_any(), r.ci_any()}, {r.rate_z(), r.ci_z()}, {r.rate_x(), r.ci_x()}}) {
            EXPECT_LE(ci.lo, rate);
            EXPECT_LE(rate, ci.hi);
            EXPECT_GE(ci.lo, 0.0);
            EXPECT_LE(ci.hi, 1.0);
        }
    }
}

TEST(RunPoint, ZOnlySkipsDualWithoutResampling) {
    const SurfaceCode code = gen_toric(4);
    ErasureChecker checker(code);
    const PointResult both = run_point(checker, 0.45, 3000, 8, 2, SweepMode::Both);
    const PointResult z = run_point(checker, 0.45, 3000, 8, 2, SweepMode::ZOnly);
    const PointResult x = run_point(checker, 0.45, 3000, 8, 2, SweepMode::XOnly);
    EXPECT_EQ(z.fail_z, both.fail_z);
    EXPECT_EQ(z.fail_x, 0u);
    EXPECT_EQ(z.fail_any, z.fail_z);
    EXPECT_EQ(x.fail_x, both.fail_x);
    EXPECT_EQ(x.fail_z, 0u);
    EXPECT_EQ(z.total_erasure_weight, both.total_erasure_weight);
}

TEST(RunPoint, ProgressAndCancellation) {
    const SurfaceCode code = gen_toric(4);
    ErasureChecker checker(code);
    std::atomic<std::uint64_t> progress{0};
    RunOptions opts;
    opts.progress = &progress;
    run_point(checker, 0.3, 1000, 1, 0, SweepMode::Both, opts);
    EXPECT_EQ(progress.load(), 1000u);

    std::atomic<bool> cancel{true};
    opts.cancel = &cancel;
    EXPECT_THROW(run_point(checker, 0.3, 1000, 1, 0, SweepMode::Both, opts), Cancelled);
}

TEST(RunSweep, EmptyGridGivesNoPoints) {
    SweepConfig config;
    config.trials_per_point = 10;
    const SweepResult r = run_sweep(gen_toric(2), config);
    EXPECT_TRUE(r.points.empty());
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.n, 8u);
}

TEST(RunSweep, RejectsBadConfig) {
    SweepConfig config;
    config.p_values = {0.5, 0.2};
    EXPECT_THROW(run_sweep(gen_toric(2), config), std::invalid_argument);
    config.p_values = {1.5};
    EXPECT_THROW(run_sweep(gen_toric(2), config), std::invalid_argument);
    config.p_values = {0.5};
    config.trials_per_point = 0;
    EXPECT_THROW(run_sweep(gen_toric(2), config), std::invalid_argument);
}

TEST(RunSweep, PointsAreIndependentOfGridNeighbours) {
    // Point i draws from (seed, i, t): the same p at the same index gives
    // the same counts even when other grid points change.
    SweepConfig a, b;
    a.p_values = {0.2, 0.4, 0.6};
    b.p_values = {0.1, 0.4, 0.9};
    a.trials_per_point = b.trials_per_point = 1500;
    a.master_seed = b.master_seed = 77;
    const SurfaceCode code = gen_toric(4);
    EXPECT_EQ(run_sweep(code, a).points[1], run_sweep(code, b).points[1]);
}

TEST(RunSweep, RateNondecreasingInP) {
    SweepConfig config;
    config.p_values = SweepConfig::linear_grid(0.0, 1.0, 11);
    config.trials_per_point = 10000;
    config.master_seed = 3;
    const SweepResult r = run_sweep(gen_toric(5), config);
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        // A drop must stay within CI overlap.
        EXPECT_GE(r.points[i].ci_any().hi, r.points[i - 1].ci_any().lo) << i;
    }
    EXPECT_EQ(r.points.front().fail_any, 0u);
    EXPECT_EQ(r.points.back().fail_any, r.points.back().trials);
}

TEST(SweepConfigTest, LinearGrid) {
    const std::vector<double> g = SweepConfig::linear_grid(0.0, 1.0, 11);
    ASSERT_EQ(g.size(), 11u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_DOUBLE_EQ(g[3], 0.3);
    EXPECT_EQ(SweepConfig::linear_grid(0.2, 0.8, 1), std::vector<double>{0.2});
    EXPECT_TRUE(SweepConfig::linear_grid(0.2, 0.8, 0).empty());
}

TEST(SweepModeText, RoundTrip) {
    for (SweepMode m : {SweepMode::Both, SweepMode::ZOnly, SweepMode::XOnly}) {
        EXPECT_EQ(parse_sweep_mode(to_string(m)), m);
    }
    EXPECT_EQ(parse_sweep_mode("zonly"), std::nullopt);
}

}  // namespace
}  // namespace squab
