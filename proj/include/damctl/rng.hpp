#pragma once

#include <cstdint>

namespace damctl {

/// SplitMix64: a 64-bit Weyl counter pushed through a finalizing mix.
/// Chosen for cross-platform reproducibility; outputs are pinned by a
/// golden test.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Starting state for an independent substream of a master seed.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
        return SplitMix64(mix(seed ^ mix(0x9E3779B97F4A7C15ULL * (stream + 1))));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform draw strictly inside (0,1); 53 significant bits.
    double next_open01() {
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace damctl
