#pragma once

#include <cstdint>

namespace assure {

/// Counter-seeded random stream. A stream is fully determined by the pair
/// (master_seed, stream_index): the same pair always reproduces the same
/// draw sequence, independent of platform and of how work is split across
/// threads. Distinct stream indices give statistically independent streams.
///
/// Internally this is xoshiro256++ with its state derived from a SplitMix64
/// chain over the seed pair.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        // SplitMix64 expansion of the (seed, stream) pair into 256 bits.
        std::uint64_t z = master_seed + stream_index * 0x9E3779B97F4A7C15ULL;
        for (auto& w : state_) {
            z += 0x9E3779B97F4A7C15ULL;
            std::uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            w = x ^ (x >> 31);
        }
    }

    std::uint64_t next_u64() {
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

    /// Uniform draw on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace assure
