#pragma once

#include <cstdint>
#include <random>

namespace visopt {

/// 64-bit Mersenne Twister (fully specified by the standard) with a fixed
/// bits-to-double conversion, so streams are identical on every platform.
/// Multistart run i uses seed ^ i.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace visopt
