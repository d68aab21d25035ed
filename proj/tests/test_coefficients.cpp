#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rfs/coefficients.hpp"
#include "rfs/errors.hpp"

using namespace rfs;
using cplx = std::complex<double>;

TEST_CASE("indexing conventions") {
  const auto a = CoefficientSequence::power_law(1.0);
  CHECK(a.at(0) == cplx(0.0));
  CHECK(a.at(1) == cplx(1.0));
  CHECK(a.at(4) == cplx(0.25));
  const auto b = CoefficientSequence::explicit_list({cplx(2.0), cplx(0, 1)});
  CHECK(b.at(0) == cplx(0.0));  // every sequence starts at k = 1
  CHECK(b.at(1) == cplx(2.0));
  CHECK(b.at(2) == cplx(0, 1));
  CHECK(b.at(3) == cplx(0.0));
}

TEST_CASE("tail energy pinned examples") {
  const auto one = CoefficientSequence::explicit_list({cplx(1.0)});
  CHECK(one.tail_energy(1).value == doctest::Approx(1.0));
  CHECK(one.tail_energy(2).value == doctest::Approx(0.0));

  CHECK(CoefficientSequence::power_law(0.5).tail_energy(1).divergent);
  CHECK(CoefficientSequence::power_law(0.5).tail_energy(100).divergent);

  const TailEnergy t = CoefficientSequence::power_law(1.0).tail_energy(10);
  CHECK_FALSE(t.divergent);
  CHECK(t.value >= std::sqrt(1.0 / 10.0));
  CHECK(t.value <= std::sqrt(1.0 / 9.0));
  // exact oracle: sum_{k>=10} k^-2 = pi^2/6 - sum_{k<10} k^-2
  double head = 0.0;
  for (int k = 1; k < 10; ++k) head += 1.0 / (double(k) * double(k));
  const double truth = std::sqrt(M_PI * M_PI / 6.0 - head);
  CHECK(t.value == doctest::Approx(truth).epsilon(1e-9));
  CHECK(truth >= t.lower());
  CHECK(truth <= t.upper());
}

TEST_CASE("tail energy is non-increasing in n") {
  const auto a = CoefficientSequence::power_law(0.8);
  double prev = a.tail_energy(1).value;
  for (std::uint64_t n = 2; n < 40; ++n) {
    const double cur = a.tail_energy(n).value;
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("weight_c pinned values") {
  CHECK(weight_c(7, GrowthRegime::polynomial()) ==
        doctest::Approx(1.0 + std::sqrt(std::log(7.0))));
  CHECK(weight_c(4, GrowthRegime::subexponential(0.5)) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(weight_c(2, GrowthRegime::polynomial()) == doctest::Approx(1.8325).epsilon(1e-4));
  double prev = weight_c(2, GrowthRegime::polynomial());
  for (std::uint64_t n = 3; n < 50; ++n) {
    CHECK(weight_c(n, GrowthRegime::polynomial()) > prev);
    prev = weight_c(n, GrowthRegime::polynomial());
    CHECK(prev >= 1.0);
  }
}

TEST_CASE("condition classification closed form") {
  CHECK(CoefficientSequence::power_law(0.6).check_condition(GrowthRegime::polynomial())
            .verdict == Verdict::holds);
  CHECK(CoefficientSequence::power_law(0.5).check_condition(GrowthRegime::polynomial())
            .verdict == Verdict::fails);
  CHECK(CoefficientSequence::power_law(0.7)
            .check_condition(GrowthRegime::subexponential(0.5))
            .verdict == Verdict::fails);
  CHECK(CoefficientSequence::power_law(0.76)
            .check_condition(GrowthRegime::subexponential(0.5))
            .verdict == Verdict::holds);
  // boundary delta = (gamma+1)/2 fails by convention
  CHECK(CoefficientSequence::power_law(0.75)
            .check_condition(GrowthRegime::subexponential(0.5))
            .verdict == Verdict::fails);
  // explicit sequences never certify
  const auto e = CoefficientSequence::explicit_list({cplx(1.0), cplx(0.5)});
  CHECK(e.check_condition(GrowthRegime::polynomial(), 1000).verdict ==
        Verdict::inconclusive);
}

TEST_CASE("block criterion") {
  const auto phi = [](double N) { return 2.0 + N; };

  SUBCASE("all-zero sequence") {
    const auto zero = CoefficientSequence::explicit_list({});
    const auto terms = check_block_criterion(zero, GrowthRegime::polynomial(), phi, 4);
    for (double t : terms) CHECK(t == 0.0);
  }

  SUBCASE("polynomial block term against brute force") {
    const auto a = CoefficientSequence::power_law(1.0);
    const auto terms = check_block_criterion(a, GrowthRegime::polynomial(), phi, 3);
    // k = 2 block: N_2 = 2^4 = 16, N_3 = 2^8 = 256.
    double s = 0.0;
    for (int l = 17; l <= 256; ++l) s += 1.0 / (double(l) * double(l));
    CHECK(terms[1] == doctest::Approx(std::sqrt(std::log(2.0 + 256.0) * s)).epsilon(1e-9));
    // decay of block terms for delta > 1/2
    CHECK(terms[2] < terms[1]);
  }

  SUBCASE("subexponential terms decrease geometrically when the condition holds") {
    // term(k) ~ 2^(k(gamma/2 + 1/2 - delta)): decreasing needs delta > 0.75.
    const auto a = CoefficientSequence::power_law(0.9);
    const auto phi_sub = [](double N) { return 2.0 + std::pow(2.0, std::sqrt(N)); };
    const auto terms =
        check_block_criterion(a, GrowthRegime::subexponential(0.5), phi_sub, 12);
    REQUIRE(terms.size() == 12);
    for (std::size_t k = 3; k < terms.size(); ++k) CHECK(terms[k] < terms[k - 1]);
  }

  SUBCASE("polynomial K_max cap") {
    const auto a = CoefficientSequence::power_law(1.0);
    CHECK_THROWS_AS(check_block_criterion(a, GrowthRegime::polynomial(), phi, 6),
                    OverflowError);
  }
}

TEST_CASE("total variation") {
  // constant sequence: differences vanish
  const auto c = CoefficientSequence::power_law(0.0, 2.0);
  const auto vc = c.total_variation(1000);
  CHECK(vc.partial_sum == doctest::Approx(0.0));
  CHECK(vc.verdict == Verdict::holds);

  const auto a = CoefficientSequence::power_law(1.0);
  const auto va = a.total_variation(100);
  CHECK(va.partial_sum == doctest::Approx(1.0 - 1.0 / 101.0).epsilon(1e-12));
  CHECK(va.verdict == Verdict::holds);
  CHECK(a.total_variation(1000).partial_sum > va.partial_sum);
  CHECK(a.total_variation(100000).partial_sum <= 1.0 + 1e-12);

  std::vector<cplx> alt;
  for (int i = 0; i < 64; ++i) alt.push_back(i % 2 == 0 ? 1.0 : -1.0);
  const auto valt = CoefficientSequence::explicit_list(alt).total_variation(40);
  CHECK(valt.partial_sum >= 2.0 * 38);
  CHECK(valt.verdict == Verdict::inconclusive);
}

TEST_CASE("json round trip and closed schema") {
  const auto a = CoefficientSequence::power_law(0.6, 2.0);
  const auto b = CoefficientSequence::from_json(a.to_json());
  CHECK(b.kind() == CoefficientSequence::Kind::power_law);
  CHECK(b.delta() == doctest::Approx(0.6));
  CHECK(b.scale() == doctest::Approx(2.0));
  CHECK(b.at(3) == a.at(3));

  const auto e = CoefficientSequence::explicit_list({cplx(1, -2), cplx(0.5)});
  const auto e2 = CoefficientSequence::from_json(e.to_json());
  CHECK(e2.at(1) == e.at(1));
  CHECK(e2.at(2) == e.at(2));
  CHECK(e2.at(7) == cplx(0.0));

  CHECK_THROWS_AS(
      CoefficientSequence::from_json("{\"kind\":\"power_law\",\"delta\":1,\"bogus\":2}"),
      ConfigError);
  CHECK_THROWS_AS(CoefficientSequence::from_json("{\"kind\":\"nope\"}"), ConfigError);
}
