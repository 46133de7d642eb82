#pragma once

#include <cstdint>

namespace qwalk {

// splitmix64 finalizer (Steele, Lea, Flood). Used as the bit mixer for
// deriving per-realization stream seeds and, in counter mode, as the
// per-stream generator. Streams are pure functions of their seed, so
// realizations can be dispatched to worker threads in any order without
// changing the numbers they draw.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

}  // namespace qwalk
