#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rfs/counterexample.hpp"
#include "rfs/errors.hpp"

using namespace rfs;

// Reference values for I_k = int_0^1 (1 - |D_k|)^2, computed independently
// with 30-digit arithmetic from the piecewise closed form.
namespace {
constexpr double kI1 = 0.37600591721538838;
constexpr double kI2 = 0.54312462591115155;
constexpr double kI5 = 0.73429807386072455;
constexpr double kI10 = 0.83587076912822057;
constexpr double kI50 = 0.95326989419709367;
constexpr double kI200 = 0.98544293060103755;
}  // namespace

TEST_CASE("oscillation integrals of the spreading kernels") {
  SUBCASE("resolution floor") {
    CHECK(min_quadrature_points(1) == 24);
    CHECK(min_quadrature_points(10) == 168);
    CHECK_THROWS_AS(dirichlet_integral(10, 100), QuadratureUnderResolved);
  }
  SUBCASE("degenerate index integrates to zero") {
    CHECK(dirichlet_integral(0, 8) == 0.0);
    CHECK(dirichlet_integral_exact(0) == 0.0);
  }
  SUBCASE("closed form matches the frozen references") {
    CHECK(dirichlet_integral_exact(1) == doctest::Approx(kI1).epsilon(1e-13));
    CHECK(dirichlet_integral_exact(2) == doctest::Approx(kI2).epsilon(1e-13));
    CHECK(dirichlet_integral_exact(5) == doctest::Approx(kI5).epsilon(1e-13));
    CHECK(dirichlet_integral_exact(10) == doctest::Approx(kI10).epsilon(1e-13));
    CHECK(dirichlet_integral_exact(50) == doctest::Approx(kI50).epsilon(1e-13));
    CHECK(dirichlet_integral_exact(200) == doctest::Approx(kI200).epsilon(1e-13));
  }
  SUBCASE("quadrature agrees with the closed form and refines toward it") {
    for (std::uint64_t k : {1, 2, 5, 10}) {
      const std::uint32_t Q = static_cast<std::uint32_t>(32 * (2 * k + 1));
      const double exact = dirichlet_integral_exact(k);
      const double coarse = dirichlet_integral(k, Q);
      const double fine = dirichlet_integral(k, 4 * Q);
      CHECK(coarse == doctest::Approx(exact).epsilon(1e-3));
      CHECK(std::fabs(fine - exact) <= std::fabs(coarse - exact) + 1e-12);
    }
  }
  SUBCASE("strictly increasing toward full mass") {
    double prev = 0.0;
    for (std::uint64_t k : {1, 2, 5, 10, 50, 200}) {
      const double v = dirichlet_integral_exact(k);
      CHECK(v > prev);
      CHECK(v < 1.0);
      prev = v;
    }
  }
}

TEST_CASE("decoupling identity") {
  SUBCASE("single index: both sides equal 2/3 of the coefficient mass") {
    CounterexampleConfig cfg;
    cfg.a = CoefficientSequence::power_law(0.5, 1.5);
    cfg.k_max = 1;
    const auto id = l2_identity_check(cfg, 7);
    CHECK(id.lhs == doctest::Approx(1.5 * 1.5 * 2.0 / 3.0).epsilon(1e-12));
    CHECK(id.rhs == doctest::Approx(id.lhs).epsilon(1e-12));
    CHECK(l2_mass_exact(cfg.a, 1) == doctest::Approx(id.lhs).epsilon(1e-12));
  }
  SUBCASE("cross terms vanish for every draw, any horizon") {
    CounterexampleConfig cfg;
    cfg.k_max = 20;
    for (std::uint64_t seed : {1, 2, 99}) {
      const auto id = l2_identity_check(cfg, seed);
      CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-10));
      // ... and both sides are draw-independent
      CHECK(id.lhs == doctest::Approx(3.008126908533948).epsilon(1e-10));
    }
  }
  SUBCASE("zero coefficients give zero") {
    CounterexampleConfig cfg;
    cfg.a = CoefficientSequence::power_law(0.5, 0.0);
    cfg.k_max = 5;
    const auto id = l2_identity_check(cfg, 1);
    CHECK(id.lhs == 0.0);
    CHECK(id.rhs == 0.0);
  }
}

TEST_CASE("exact coefficient mass") {
  // divergent case: sum k^-1 * 2k/(2k+1) passes 3 long before k = 1000
  CHECK(l2_mass_exact(CoefficientSequence::power_law(0.5), 1000) ==
        doctest::Approx(6.872264846920085).epsilon(1e-13));
  // square-summable control stays below zeta(2)
  CHECK(l2_mass_exact(CoefficientSequence::power_law(1.0), 1000) ==
        doctest::Approx(1.226412027260499).epsilon(1e-13));
  CHECK(l2_mass_exact(CoefficientSequence::power_law(1.0), 1000) <
        M_PI * M_PI / 6.0 + 0.01);
}

TEST_CASE("divergence profile") {
  SUBCASE("borderline coefficients grow through the checkpoints") {
    CounterexampleConfig cfg;
    cfg.k_max = 50;
    const auto profile = divergence_profile(cfg, {1, 2, 3}, {5, 15, 50});
    REQUIRE(profile.size() == 3);
    CHECK(profile[0].first == 5);
    CHECK(profile[2].first == 50);
    CHECK(profile[1].second > profile[0].second);
    CHECK(profile[2].second > profile[1].second);
    // medians track the exact mean of the integral loosely
    CHECK(profile[2].second == doctest::Approx(l2_mass_exact(cfg.a, 50)).epsilon(0.35));
  }
  SUBCASE("square-summable control stays bounded") {
    CounterexampleConfig cfg;
    cfg.a = CoefficientSequence::power_law(1.0);
    cfg.k_max = 50;
    const auto profile = divergence_profile(cfg, {1, 2, 3}, {50});
    CHECK(profile[0].second < 2.0);
  }
  SUBCASE("bad configs") {
    CounterexampleConfig cfg;
    cfg.k_max = 10;
    CHECK_THROWS_AS(divergence_profile(cfg, {}, {5}), ConfigError);
    CHECK_THROWS_AS(divergence_profile(cfg, {1}, {11}), ConfigError);
    CHECK_THROWS_AS(divergence_profile(cfg, {1}, {}), ConfigError);
    cfg.k_max = 0;
    CHECK_THROWS_AS(divergence_profile(cfg, {1}, {1}), ConfigError);
    CounterexampleConfig under;
    under.k_max = 10;
    under.quadrature_points = 8;
    CHECK_THROWS_AS(l2_identity_check(under, 1), QuadratureUnderResolved);
  }
}
