#pragma once

#include <cstdint>
#include <random>

namespace holoq {

/// Seeded random source producing doubles independent of the standard
/// library's distribution implementations, so reports are reproducible
/// across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace holoq
