#pragma once

#include <cmath>
#include <cstdint>

namespace rapcert {

// SplitMix64: seedable, splittable, and fully deterministic across platforms
// (no std:: distributions anywhere, so byte-identical outputs are a matter of
// seed + call order only).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in the open interval (0, 1).
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Exponential with the given rate; strictly positive.
    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

    // Independent child stream; deterministic in (seed, index).
    SplitMix64 split(std::uint64_t index) const {
        SplitMix64 mixer(state_ ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return SplitMix64(mixer.next());
    }

  private:
    std::uint64_t state_;
};

}  // namespace rapcert
