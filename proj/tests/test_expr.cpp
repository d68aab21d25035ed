#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rfs/errors.hpp"
#include "rfs/expr.hpp"

using rfs::ConfigError;
using rfs::Expression;

TEST_CASE("constants and the index variable") {
  CHECK(Expression::parse("3").eval(0) == doctest::Approx(3.0));
  CHECK(Expression::parse("k").eval(7) == doctest::Approx(7.0));
  CHECK(Expression::parse("pi").eval(0) == doctest::Approx(M_PI));
  CHECK(Expression().eval(5) == doctest::Approx(0.0));
  CHECK(Expression(2.5).eval(5) == doctest::Approx(2.5));
}

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression::parse("1+2*3").eval(0) == doctest::Approx(7.0));
  CHECK(Expression::parse("(1+2)*3").eval(0) == doctest::Approx(9.0));
  CHECK(Expression::parse("2^3^2").eval(0) == doctest::Approx(512.0));  // right assoc
  CHECK(Expression::parse("-k^2").eval(3) == doctest::Approx(-9.0));
  CHECK(Expression::parse("10/4").eval(0) == doctest::Approx(2.5));
  CHECK(Expression::parse("k^2-1").eval(4) == doctest::Approx(15.0));
}

TEST_CASE("functions") {
  CHECK(Expression::parse("log(k+2)").eval(1) == doctest::Approx(std::log(3.0)));
  CHECK(Expression::parse("sqrt(k)").eval(16) == doctest::Approx(4.0));
  CHECK(Expression::parse("exp(0)").eval(0) == doctest::Approx(1.0));
  CHECK(Expression::parse("abs(-3)").eval(0) == doctest::Approx(3.0));
  CHECK(Expression::parse("min(k,3)").eval(5) == doctest::Approx(3.0));
  CHECK(Expression::parse("max(k,3)").eval(5) == doctest::Approx(5.0));
  CHECK(Expression::parse("3*sqrt(log(k+2))").eval(2) ==
        doctest::Approx(3.0 * std::sqrt(std::log(4.0))));
}

TEST_CASE("is_constant and text round-trip") {
  CHECK(Expression::parse("3*pi").is_constant());
  CHECK_FALSE(Expression::parse("k+1").is_constant());
  const Expression e = Expression::parse("(k+1)^2-1");
  CHECK(Expression::parse(e.text()).eval(3) == e.eval(3));
}

TEST_CASE("malformed input throws ConfigError") {
  CHECK_THROWS_AS(Expression::parse(""), ConfigError);
  CHECK_THROWS_AS(Expression::parse("1+"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(k)"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(1+2"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("1 2"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("min(1)"), ConfigError);
}
