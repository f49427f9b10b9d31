#pragma once

#include <cstdint>
#include <random>

namespace iqa {

// Deterministic generator: mt19937_64 core with hand-rolled transforms so
// the same seed yields the same stream on every platform (std::normal_distribution
// is implementation defined, so it is avoided).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generates pairs, caches the spare.
  double gaussian();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace iqa
