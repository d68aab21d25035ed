#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "rfs/errors.hpp"
#include "rfs/fourier.hpp"

using rfs::ConfigError;
using rfs::FourierFunction;
using cplx = std::complex<double>;

TEST_CASE("evaluate at pinned points") {
  const FourierFunction e1({{1, 1.0}});
  CHECK(std::abs(e1.evaluate(0.0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(e1.evaluate(0.5) - cplx(-1.0)) < 1e-15);

  const FourierFunction cos2({{-2, 0.5}, {2, 0.5}});  // cos(4 pi alpha)
  CHECK(std::abs(cos2.evaluate(0.125)) < 1e-15);
}

TEST_CASE("norms") {
  CHECK(FourierFunction().norm_A() == 0.0);
  CHECK(FourierFunction().norm_B() == 0.0);
  CHECK(FourierFunction({{1, 1.0}}).norm_A() == doctest::Approx(1.0));
  CHECK(FourierFunction({{-3, cplx(0, 2)}, {5, -1.0}}).norm_A() == doctest::Approx(3.0));
  CHECK(FourierFunction({{1, 1.0}}).norm_B() ==
        doctest::Approx(std::sqrt(std::log(4.0))).epsilon(1e-12));
  CHECK(FourierFunction({{1, 1.0}}).norm_B() == doctest::Approx(1.17741).epsilon(1e-5));
  CHECK(FourierFunction({{0, 1.0}, {1, 1.0}}).norm_B() ==
        doctest::Approx(std::sqrt(std::log(3.0)) + std::sqrt(std::log(4.0))));
}

TEST_CASE("norm inequality and periodicity") {
  const FourierFunction f({{-4, cplx(0.3, -1.1)}, {0, 2.0}, {7, cplx(-0.5, 0.2)}});
  CHECK(f.norm_B() >= std::sqrt(std::log(3.0)) * f.norm_A() - 1e-14);
  for (double alpha : {-2.7, -0.3, 0.0, 0.41, 1.9})
    CHECK(std::abs(f.evaluate(alpha + 1.0) - f.evaluate(alpha)) < 1e-12);
}

TEST_CASE("linearity of evaluation") {
  const FourierFunction f({{-1, cplx(1, 1)}, {2, 0.5}});
  const FourierFunction g({{2, 0.25}, {3, -1.0}});
  const FourierFunction sum = f + g;
  for (double alpha : {0.1, 0.37, 0.9})
    CHECK(std::abs(sum.evaluate(alpha) - (f.evaluate(alpha) + g.evaluate(alpha))) <
          1e-13);
  CHECK(sum.norm_A() <= f.norm_A() + g.norm_A() + 1e-14);
}

TEST_CASE("mean_zero and zero-coefficient dropping") {
  CHECK(FourierFunction({{1, 1.0}, {-1, 1.0}}).mean_zero());
  CHECK_FALSE(FourierFunction({{0, 0.5}, {1, 1.0}}).mean_zero());
  const FourierFunction f({{1, 1.0}, {2, 0.0}});
  CHECK(f.coeffs().size() == 1);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(FourierFunction({{1, 1.0}, {1, 2.0}}), ConfigError);
  CHECK_THROWS_AS(FourierFunction({{1, cplx(std::nan(""), 0)}}), ConfigError);
}

TEST_CASE("json round trip and closed schema") {
  const FourierFunction f({{-2, cplx(0.5, -1.5)}, {3, 2.0}});
  const FourierFunction g = FourierFunction::from_json(f.to_json());
  CHECK(g.coeffs() == f.coeffs());
  CHECK_THROWS_AS(FourierFunction::from_json("{\"coeffs\":[],\"extra\":1}"), ConfigError);
  CHECK_THROWS_AS(FourierFunction::from_json("not json"), ConfigError);
}
