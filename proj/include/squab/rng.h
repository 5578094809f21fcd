#pragma once

#include <cstdint>

namespace squab {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 output function (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of the stream for one trial:
///   mix64(mix64(mix64(master + γ) ^ point + γ) ^ trial + γ)
/// Depends only on its arguments, so trials can run in any order on any
/// worker.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t point_index, std::uint64_t trial_index) {
    std::uint64_t h = mix64(master_seed + kGoldenGamma);
    h = mix64((h ^ point_index) + kGoldenGamma);
    return mix64((h ^ trial_index) + kGoldenGamma);
}

/// SplitMix64 stream: state advances by γ, output is mix64(state).
class TrialRng {
public:
    explicit constexpr TrialRng(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

}  // namespace squab
