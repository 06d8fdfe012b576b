#pragma once

#include <array>
#include <cstdint>

namespace qrng {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += kSplitMix64Gamma;
    return mix64(state);
}

/// xoshiro256++ with SplitMix64 seeding (any 64-bit seed yields a full,
/// non-zero state). Not cryptographic; used for simulation only.
class Xoshiro256pp {
public:
    explicit constexpr Xoshiro256pp(std::uint64_t seed = 1) {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            w = splitmix64(x);
        }
    }

    constexpr std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// 53-bit uniform in [0, 1).
    constexpr double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Seed for the substream that generates block `block_index`. This is the
/// (block_index + 1)-th output of the SplitMix64 sequence anchored at
/// `master_seed`, so substreams are independent of thread count and can be
/// produced in any order.
inline constexpr std::uint64_t block_seed(std::uint64_t master_seed, std::uint64_t block_index) {
    return mix64(master_seed + (block_index + 1) * kSplitMix64Gamma);
}

/// Recorded in output metadata; bumping it invalidates stream reproducibility.
inline constexpr const char* kGeneratorId = "xoshiro256++/splitmix64-block-substreams/v1";

}  // namespace qrng
