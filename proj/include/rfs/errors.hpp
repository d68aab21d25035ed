#pragma once

#include <stdexcept>
#include <string>

namespace rfs {

// Numeric refusals: the computation declines to answer rather than degrade
// precision silently. The CLI maps these to exit code 3.
struct NumericRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooCoarse : NumericRefusal {
  using NumericRefusal::NumericRefusal;
};

struct InfiniteMoment : NumericRefusal {
  using NumericRefusal::NumericRefusal;
};

struct QuadratureUnderResolved : NumericRefusal {
  using NumericRefusal::NumericRefusal;
};

struct OverflowError : NumericRefusal {
  using NumericRefusal::NumericRefusal;
};

struct AperiodicityViolated : NumericRefusal {
  using NumericRefusal::NumericRefusal;
};

// Malformed or out-of-schema configuration. The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rfs
