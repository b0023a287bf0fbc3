#pragma once

#include <cmath>
#include <cstdint>

namespace ringld {

/// Counter-based splitmix64 stream. Each (seed, trial, flow) triple yields an
/// independent reproducible stream, so parallel trials never share state.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Derive the stream for a (trial, substream) pair from a master seed.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t substream) {
        std::uint64_t s = mix(seed ^ 0x5851f42d4c957f2dULL);
        s = mix(s ^ (trial * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
        s = mix(s ^ (substream * 0x9e3779b97f4a7c15ULL + 1));
        return SplitMix64(s);
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in (0, 1]; never returns 0 so log() is always safe.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    std::uint64_t state_;
};

}  // namespace ringld
