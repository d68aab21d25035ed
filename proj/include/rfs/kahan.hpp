#pragma once

#include <complex>

namespace rfs {

// Kahan-compensated accumulator. Long power-law tails lose digits under
// naive accumulation once n reaches ~10^6.
template <typename Value>
struct KahanAccumulator {
  Value sum{};
  Value compensation{};

  void add(Value value) {
    const Value y = value - compensation;
    const Value t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }

  KahanAccumulator& operator+=(Value value) {
    add(value);
    return *this;
  }

  Value value() const { return sum; }
};

using KahanReal = KahanAccumulator<double>;
using KahanComplex = KahanAccumulator<std::complex<double>>;

}  // namespace rfs
