#pragma once

#include <cmath>
#include <cstdint>

namespace rfs {

// Counter-based random streams: every word is a pure function of
// (seed, stream, counter), so X_k is reproducible from (seed, k) alone,
// independent of evaluation order and thread count.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  // One stream per (seed, index k, draw). Consecutive draws at the same k
  // occupy disjoint streams, so a variable-length rejection loop in one draw
  // never shifts another draw's values.
  RandomStream(std::uint64_t seed, std::uint64_t k, std::uint64_t draw = 0) {
    std::uint64_t s = mix64(seed ^ 0x243F6A8885A308D3ull);
    s = mix64(s ^ k * 0x9E3779B97F4A7C15ull);
    state_ = mix64(s ^ draw * 0xD1B54A32D192ED03ull);
  }

  std::uint64_t next_word() { return mix64(state_ + (counter_++) * 0x9E3779B97F4A7C15ull); }

  // Uniform on (0,1]; never 0, so log(u) is safe.
  double u01() {
    return static_cast<double>((next_word() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0,1).
  double u01_left() { return static_cast<double>(next_word() >> 11) * 0x1.0p-53; }

  double gaussian() {
    const double u1 = u01();
    const double u2 = u01_left();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

}  // namespace rfs
