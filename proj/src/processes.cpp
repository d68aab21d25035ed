#include "rfs/processes.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "rfs/errors.hpp"
#include "rfs/kahan.hpp"

namespace rfs {

namespace {

double u01_open(RandomStream& rng) {
  return (static_cast<double>(rng.next_word() >> 11) + 0.5) * 0x1.0p-53;
}

int poisson_knuth(double lambda, RandomStream& rng) {
  // expects lambda <= 32
  const double limit = std::exp(-lambda);
  int n = -1;
  double p = 1.0;
  do {
    ++n;
    p *= rng.u01();
  } while (p > limit);
  return n;
}

// Adaptive Simpson with absolute/relative tolerance, depth-capped.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double gauss_abs_moment(double beta) {
  // E|Z|^beta = 2^(beta/2) Gamma((beta+1)/2) / sqrt(pi)
  return std::exp(std::lgamma((beta + 1.0) / 2.0) + 0.5 * beta * std::log(2.0) -
                  0.5 * std::log(M_PI));
}

double density(const BaseLaw& base, double x) {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, StandardGaussian>) {
          return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return x < 0 ? 0.0 : law.lambda * std::exp(-law.lambda * x);
        } else if constexpr (std::is_same_v<T, CauchyLaw>) {
          return law.scale / (M_PI * (law.scale * law.scale + x * x));
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return std::exp(-std::fabs(x) / law.scale) / (2.0 * law.scale);
        } else {
          return 0.0;  // point masses have no density; handled separately
        }
      },
      base);
}

// Support endpoints beyond which the density mass is negligible (< 1e-300).
std::pair<double, double> effective_support(const BaseLaw& base) {
  return std::visit(
      [&](const auto& law) -> std::pair<double, double> {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, StandardGaussian>) {
          return {-40.0, 40.0};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {0.0, 720.0 / law.lambda};
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return {-720.0 * law.scale, 720.0 * law.scale};
        } else {
          return {0.0, 0.0};
        }
      },
      base);
}

}  // namespace

double sample(const BaseLaw& base, RandomStream& rng) {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, StandardGaussian>) {
          return rng.gaussian();
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return -std::log(rng.u01()) / law.lambda;
        } else if constexpr (std::is_same_v<T, CauchyLaw>) {
          return law.scale * std::tan(M_PI * (u01_open(rng) - 0.5));
        } else if constexpr (std::is_same_v<T, Laplace>) {
          const double u = u01_open(rng);
          return u < 0.5 ? law.scale * std::log(2.0 * u)
                         : -law.scale * std::log(2.0 * (1.0 - u));
        } else {
          const double u = rng.u01_left();
          double acc = 0.0;
          for (std::size_t i = 0; i < law.points.size(); ++i) {
            acc += law.probs[i];
            if (u < acc) return law.points[i];
          }
          return law.points.back();
        }
      },
      base);
}

double sample(const Law& law, RandomStream& rng) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          return l.mu + l.sigma * (rng.u01_left() - 0.5);
        } else if constexpr (std::is_same_v<T, ScaleShift>) {
          return l.sigma * sample(l.base, rng) + l.mu;
        } else if constexpr (std::is_same_v<T, ConvPower>) {
          if (l.k == 0) return 0.0;
          // N(0, k) shortcut: summing 10^4+ Gaussian draws is the same law.
          if (l.k > 10000 && std::holds_alternative<StandardGaussian>(l.base))
            return std::sqrt(static_cast<double>(l.k)) * rng.gaussian();
          KahanReal acc;
          for (std::uint64_t i = 0; i < l.k; ++i) acc += sample(l.base, rng);
          return acc.value();
        } else if constexpr (std::is_same_v<T, UniformIntegers>) {
          const auto n = static_cast<std::uint64_t>(l.hi - l.lo + 1);
          const auto idx = std::min<std::uint64_t>(
              n - 1, static_cast<std::uint64_t>(rng.u01_left() * static_cast<double>(n)));
          return static_cast<double>(l.lo + static_cast<std::int64_t>(idx));
        } else {  // Poisson, by additivity in chunks Knuth can handle
          double remaining = l.lambda;
          std::int64_t total = 0;
          while (remaining > 32.0) {
            total += poisson_knuth(32.0, rng);
            remaining -= 32.0;
          }
          total += poisson_knuth(remaining, rng);
          return static_cast<double>(total);
        }
      },
      law);
}

std::complex<double> char_fn(const BaseLaw& base, double t) {
  const double w = 2.0 * M_PI * t;
  return std::visit(
      [&](const auto& law) -> std::complex<double> {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, StandardGaussian>) {
          return std::exp(-0.5 * w * w);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return law.lambda / std::complex<double>{law.lambda, -w};
        } else if constexpr (std::is_same_v<T, CauchyLaw>) {
          return std::exp(-law.scale * std::fabs(w));
        } else if constexpr (std::is_same_v<T, Laplace>) {
          const double bw = law.scale * w;
          return 1.0 / (1.0 + bw * bw);
        } else {
          KahanComplex acc;
          for (std::size_t i = 0; i < law.points.size(); ++i)
            acc += law.probs[i] *
                   std::complex<double>{std::cos(w * law.points[i]),
                                        std::sin(w * law.points[i])};
          return acc.value();
        }
      },
      base);
}

std::complex<double> char_fn(const Law& law, double t) {
  return std::visit(
      [&](const auto& l) -> std::complex<double> {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          const double phase = 2.0 * M_PI * t * l.mu;
          const std::complex<double> shift{std::cos(phase), std::sin(phase)};
          const double x = M_PI * t * l.sigma;
          // sinc with the removable singularity expanded
          const double sinc =
              std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
          return shift * sinc;
        } else if constexpr (std::is_same_v<T, ScaleShift>) {
          const double phase = 2.0 * M_PI * t * l.mu;
          return std::complex<double>{std::cos(phase), std::sin(phase)} *
                 char_fn(l.base, l.sigma * t);
        } else if constexpr (std::is_same_v<T, ConvPower>) {
          if (l.k == 0) return 1.0;
          const std::complex<double> z = char_fn(l.base, t);
          const double r = std::abs(z);
          if (r == 0.0) return 0.0;
          // exact integer power in polar form, free of branch-cut trouble
          return std::polar(std::pow(r, static_cast<double>(l.k)),
                            std::arg(z) * static_cast<double>(l.k));
        } else if constexpr (std::is_same_v<T, UniformIntegers>) {
          // integer support: 1-periodic in t, Dirichlet form
          const auto n = static_cast<double>(l.hi - l.lo + 1);
          const double tau = t - std::round(t);
          const double denom = std::sin(M_PI * tau);
          if (denom == 0.0) return 1.0;
          const double ratio = std::sin(M_PI * tau * n) / (n * denom);
          const double phase = M_PI * tau * static_cast<double>(l.lo + l.hi);
          return std::complex<double>{std::cos(phase), std::sin(phase)} * ratio;
        } else {
          const double w = 2.0 * M_PI * t;
          const std::complex<double> e{std::cos(w) - 1.0, std::sin(w)};
          return std::exp(l.lambda * e);
        }
      },
      law);
}

double char_fn_modulus_uniform_integers(std::uint64_t k, double alpha) {
  if (k == 0) return 1.0;  // single-point support
  const double n = static_cast<double>(2 * k + 1);
  const double tau = alpha - std::round(alpha);
  const double denom = std::sin(M_PI * tau);
  if (denom == 0.0) return 1.0;
  return std::fabs(std::sin(M_PI * tau * n)) / (n * std::fabs(denom));
}

double abs_moment(const BaseLaw& base, double beta) {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, StandardGaussian>) {
          return gauss_abs_moment(beta);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return std::exp(std::lgamma(beta + 1.0) - beta * std::log(law.lambda));
        } else if constexpr (std::is_same_v<T, CauchyLaw>) {
          if (beta >= 1.0)
            throw InfiniteMoment(
                fmt::format("Cauchy law has no absolute moment of order {}", beta));
          return std::pow(law.scale, beta) / std::cos(M_PI * beta / 2.0);
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return std::exp(std::lgamma(beta + 1.0)) * std::pow(law.scale, beta);
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < law.points.size(); ++i)
            acc += law.probs[i] * std::pow(std::fabs(law.points[i]), beta);
          return acc;
        }
      },
      base);
}

namespace {

// E |sigma X + mu|^beta for a continuous base law, adaptive quadrature with
// relative tolerance 1e-8 (heavy Cauchy tails get an analytic tail patch).
double scale_shift_moment(const BaseLaw& base, double sigma, double mu, double beta) {
  if (mu == 0.0) return std::pow(std::fabs(sigma), beta) * abs_moment(base, beta);
  if (const auto* pm = std::get_if<PointMassMixture>(&base)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pm->points.size(); ++i)
      acc += pm->probs[i] * std::pow(std::fabs(sigma * pm->points[i] + mu), beta);
    return acc;
  }
  auto integrand = [&](double x) {
    return std::pow(std::fabs(sigma * x + mu), beta) * density(base, x);
  };
  if (std::holds_alternative<CauchyLaw>(base)) {
    if (beta >= 1.0)
      throw InfiniteMoment(
          fmt::format("Cauchy law has no absolute moment of order {}", beta));
    const double s = std::get<CauchyLaw>(base).scale;
    const double cut = 1e8 * std::max({1.0, s, std::fabs(mu / sigma)});
    const double core = integrate(integrand, -cut, cut, 1e-10);
    // int_cut^inf |sigma x|^beta s/(pi x^2) dx on both sides
    const double tails = 2.0 * (s / M_PI) * std::pow(std::fabs(sigma), beta) *
                         std::pow(cut, beta - 1.0) / (1.0 - beta);
    return core + tails;
  }
  auto [lo, hi] = effective_support(base);
  const double scale_guess = std::pow(std::fabs(sigma) + std::fabs(mu), beta);
  return integrate(integrand, lo, hi, 1e-10 * std::max(1.0, scale_guess));
}

}  // namespace

double abs_moment(const Law& law, double beta) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          const double a = l.mu - l.sigma / 2.0;
          const double b = l.mu + l.sigma / 2.0;
          auto F = [&](double x) {
            return std::copysign(std::pow(std::fabs(x), beta + 1.0), x) / (beta + 1.0);
          };
          return (F(b) - F(a)) / l.sigma;
        } else if constexpr (std::is_same_v<T, ScaleShift>) {
          return scale_shift_moment(l.base, l.sigma, l.mu, beta);
        } else if constexpr (std::is_same_v<T, ConvPower>) {
          if (l.k == 0) return 0.0;
          const double kk = static_cast<double>(l.k);
          if (std::holds_alternative<StandardGaussian>(l.base))
            return std::pow(kk, beta / 2.0) * gauss_abs_moment(beta);
          if (const auto* e = std::get_if<Exponential>(&l.base))
            // Gamma(k, lambda)
            return std::exp(std::lgamma(kk + beta) - std::lgamma(kk) -
                            beta * std::log(e->lambda));
          if (const auto* c = std::get_if<CauchyLaw>(&l.base)) {
            if (beta >= 1.0)
              throw InfiniteMoment(
                  fmt::format("Cauchy law has no absolute moment of order {}", beta));
            return std::pow(kk * c->scale, beta) / std::cos(M_PI * beta / 2.0);
          }
          if (beta == 2.0) {
            // variance and mean add across the convolution
            const double m1 = std::visit(
                [&](const auto& b) -> double {
                  using B = std::decay_t<decltype(b)>;
                  if constexpr (std::is_same_v<B, Laplace>) return 0.0;
                  else if constexpr (std::is_same_v<B, PointMassMixture>) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < b.points.size(); ++i)
                      acc += b.probs[i] * b.points[i];
                    return acc;
                  } else return 0.0;
                },
                l.base);
            const double m2 = std::visit(
                [&](const auto& b) -> double {
                  using B = std::decay_t<decltype(b)>;
                  if constexpr (std::is_same_v<B, Laplace>)
                    return 2.0 * b.scale * b.scale;
                  else if constexpr (std::is_same_v<B, PointMassMixture>) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < b.points.size(); ++i)
                      acc += b.probs[i] * b.points[i] * b.points[i];
                    return acc;
                  } else return 0.0;
                },
                l.base);
            return kk * (m2 - m1 * m1) + kk * kk * m1 * m1;
          }
          throw InfiniteMoment(
              "abs_moment: no closed form for this convolution power; use beta = 2 "
              "or a Gaussian/Exponential/Cauchy base");
        } else if constexpr (std::is_same_v<T, UniformIntegers>) {
          KahanReal acc;
          for (std::int64_t m = l.lo; m <= l.hi; ++m)
            acc += std::pow(std::fabs(static_cast<double>(m)), beta);
          return acc.value() / static_cast<double>(l.hi - l.lo + 1);
        } else {  // Poisson
          if (beta == 1.0) return l.lambda;
          if (beta == 2.0) return l.lambda + l.lambda * l.lambda;
          KahanReal acc;
          double logp = -l.lambda;  // log P(X = 0)
          double cumulative = 0.0;
          for (std::int64_t x = 0; x < 100000000; ++x) {
            const double p = std::exp(logp);
            cumulative += p;
            if (x > 0) acc += p * std::pow(static_cast<double>(x), beta);
            if (cumulative > 1.0 - 1e-14 && static_cast<double>(x) > l.lambda + 10)
              break;
            logp += std::log(l.lambda) - std::log(static_cast<double>(x + 1));
          }
          return acc.value();
        }
      },
      law);
}

std::optional<double> abs_mean(const Law& law) {
  const bool cauchy = std::visit(
      [](const auto& l) -> bool {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ScaleShift>)
          return std::holds_alternative<CauchyLaw>(l.base);
        else if constexpr (std::is_same_v<T, ConvPower>)
          return std::holds_alternative<CauchyLaw>(l.base);
        else
          return false;
      },
      law);
  if (cauchy) return std::nullopt;
  // ConvPower of k draws: subadditive bound k * E|base| is good enough for a
  // Lipschitz guard.
  if (const auto* cp = std::get_if<ConvPower>(&law))
    return static_cast<double>(cp->k) * abs_moment(cp->base, 1.0);
  return abs_moment(law, 1.0);
}

// ---------------------------------------------------------------------------
// ProcessFamily

ProcessFamily ProcessFamily::uniform_interval(Expression mu, Expression sigma,
                                              double beta, GrowthRegime growth) {
  ProcessFamily p;
  p.family_ = FamilyKind::uniform_interval;
  p.p1_ = std::move(mu);
  p.p2_ = std::move(sigma);
  p.beta_ = beta;
  p.growth_ = growth;
  return p;
}

ProcessFamily ProcessFamily::scale_shift(BaseLaw base, Expression sigma, Expression mu,
                                         double beta, GrowthRegime growth) {
  ProcessFamily p;
  p.family_ = FamilyKind::scale_shift;
  p.base_ = std::move(base);
  p.p1_ = std::move(sigma);
  p.p2_ = std::move(mu);
  p.beta_ = beta;
  p.growth_ = growth;
  return p;
}

ProcessFamily ProcessFamily::conv_power(BaseLaw base, double beta, GrowthRegime growth) {
  ProcessFamily p;
  p.family_ = FamilyKind::conv_power;
  p.base_ = std::move(base);
  p.beta_ = beta;
  p.growth_ = growth;
  return p;
}

ProcessFamily ProcessFamily::uniform_integers(Expression lo, Expression hi, double beta,
                                              GrowthRegime growth) {
  ProcessFamily p;
  p.family_ = FamilyKind::uniform_integers;
  p.p1_ = std::move(lo);
  p.p2_ = std::move(hi);
  p.beta_ = beta;
  p.growth_ = growth;
  return p;
}

ProcessFamily ProcessFamily::poisson(Expression lambda, double beta,
                                     GrowthRegime growth) {
  ProcessFamily p;
  p.family_ = FamilyKind::poisson;
  p.p1_ = std::move(lambda);
  p.beta_ = beta;
  p.growth_ = growth;
  return p;
}

ProcessFamily ProcessFamily::counterexample_integers() {
  // X_k uniform on the 2k+1 integers of [k^2, (k+1)^2 - 1]; E|X_k| = O(k^2).
  return uniform_integers(Expression::parse("k^2"), Expression::parse("(k+1)^2-1"),
                          /*beta=*/1.0, GrowthRegime::polynomial(2.0));
}

const BaseLaw* ProcessFamily::base() const {
  if (family_ == FamilyKind::scale_shift || family_ == FamilyKind::conv_power)
    return &base_;
  return nullptr;
}

Law ProcessFamily::law_at(std::uint64_t k) const {
  const double kd = static_cast<double>(k);
  switch (family_) {
    case FamilyKind::uniform_interval: {
      const double sigma = p2_.eval(kd);
      if (!(sigma > 0))
        throw ConfigError(fmt::format("uniform_interval: sigma({}) = {} not > 0", k, sigma));
      return UniformInterval{p1_.eval(kd), sigma};
    }
    case FamilyKind::scale_shift:
      return ScaleShift{base_, p1_.eval(kd), p2_.eval(kd)};
    case FamilyKind::conv_power:
      return ConvPower{base_, k};
    case FamilyKind::uniform_integers: {
      const auto lo = static_cast<std::int64_t>(std::llround(p1_.eval(kd)));
      const auto hi = static_cast<std::int64_t>(std::llround(p2_.eval(kd)));
      if (lo > hi)
        throw ConfigError(fmt::format("uniform_integers: lo({0}) > hi({0})", k));
      return UniformIntegers{lo, hi};
    }
    case FamilyKind::poisson: {
      const double lambda = p1_.eval(kd);
      if (!(lambda > 0))
        throw ConfigError(fmt::format("poisson: lambda({}) = {} not > 0", k, lambda));
      return PoissonLaw{lambda};
    }
  }
  throw ConfigError("ProcessFamily: unknown family");
}

double ProcessFamily::sample(std::uint64_t seed, std::uint64_t k,
                             std::uint64_t draw) const {
  RandomStream rng(seed, k, draw);
  return rfs::sample(law_at(k), rng);
}

double ProcessFamily::moment_bound(std::uint64_t N) const {
  const double m = abs_moment(law_at(N), beta_);
  return 2.0 + std::max(static_cast<double>(N), m);
}

std::complex<double> ProcessFamily::mean_of_f(std::uint64_t k, const FourierFunction& f,
                                              double alpha) const {
  const Law law = law_at(k);
  KahanComplex acc;
  for (const auto& [j, c] : f.coeffs())
    acc += c * char_fn(law, static_cast<double>(j) * alpha);
  return acc.value();
}

// ---------------------------------------------------------------------------
// JSON descriptors

namespace {

nlohmann::json base_to_json(const BaseLaw& base) {
  return std::visit(
      [](const auto& law) -> nlohmann::json {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, StandardGaussian>) {
          return {{"kind", "gaussian"}};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {{"kind", "exponential"}, {"lambda", law.lambda}};
        } else if constexpr (std::is_same_v<T, CauchyLaw>) {
          return {{"kind", "cauchy"}, {"scale", law.scale}};
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return {{"kind", "laplace"}, {"scale", law.scale}};
        } else {
          nlohmann::json pts = nlohmann::json::array();
          for (std::size_t i = 0; i < law.points.size(); ++i)
            pts.push_back({law.points[i], law.probs[i]});
          return {{"kind", "point_mass"}, {"points", pts}};
        }
      },
      base);
}

BaseLaw base_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind"))
    throw ConfigError("base law: expected object with \"kind\"");
  const std::string kind = doc["kind"].get<std::string>();
  auto check_fields = [&](std::initializer_list<const char*> allowed) {
    for (auto& [key, v] : doc.items()) {
      bool ok = key == "kind";
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError("base law: unknown field \"" + key + "\"");
    }
  };
  if (kind == "gaussian") {
    check_fields({});
    return StandardGaussian{};
  }
  if (kind == "exponential") {
    check_fields({"lambda"});
    return Exponential{doc.value("lambda", 1.0)};
  }
  if (kind == "cauchy") {
    check_fields({"scale"});
    return CauchyLaw{doc.value("scale", 1.0)};
  }
  if (kind == "laplace") {
    check_fields({"scale"});
    return Laplace{doc.value("scale", 1.0)};
  }
  if (kind == "point_mass") {
    check_fields({"points"});
    PointMassMixture pm;
    double total = 0.0;
    for (const auto& entry : doc.value("points", nlohmann::json::array())) {
      if (!entry.is_array() || entry.size() != 2)
        throw ConfigError("point_mass: points entries must be [x, p]");
      pm.points.push_back(entry[0].get<double>());
      pm.probs.push_back(entry[1].get<double>());
      total += entry[1].get<double>();
    }
    if (pm.points.empty() || std::fabs(total - 1.0) > 1e-12)
      throw ConfigError("point_mass: probabilities must sum to 1");
    return pm;
  }
  throw ConfigError("base law: unknown kind \"" + kind + "\"");
}

nlohmann::json growth_to_json(const GrowthRegime& g) {
  if (g.kind == GrowthRegime::Kind::polynomial)
    return {{"regime", "polynomial"}, {"d", g.d}};
  return {{"regime", "subexponential"}, {"gamma", g.gamma}};
}

GrowthRegime growth_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("regime"))
    throw ConfigError("growth: expected object with \"regime\"");
  const std::string regime = doc["regime"].get<std::string>();
  for (auto& [key, v] : doc.items())
    if (key != "regime" && key != "d" && key != "gamma")
      throw ConfigError("growth: unknown field \"" + key + "\"");
  if (regime == "polynomial") return GrowthRegime::polynomial(doc.value("d", 1.0));
  if (regime == "subexponential")
    return GrowthRegime::subexponential(doc.value("gamma", 0.5));
  throw ConfigError("growth: unknown regime \"" + regime + "\"");
}

}  // namespace

std::string ProcessFamily::to_json() const {
  nlohmann::json doc;
  switch (family_) {
    case FamilyKind::uniform_interval:
      doc = {{"family", "uniform_interval"}, {"mu", p1_.text()}, {"sigma", p2_.text()}};
      break;
    case FamilyKind::scale_shift:
      doc = {{"family", "scale_shift"},
             {"base", base_to_json(base_)},
             {"sigma", p1_.text()},
             {"mu", p2_.text()}};
      break;
    case FamilyKind::conv_power:
      doc = {{"family", "conv_power"}, {"base", base_to_json(base_)}};
      break;
    case FamilyKind::uniform_integers:
      doc = {{"family", "uniform_integers"}, {"lo", p1_.text()}, {"hi", p2_.text()}};
      break;
    case FamilyKind::poisson:
      doc = {{"family", "poisson"}, {"lambda", p1_.text()}};
      break;
  }
  doc["beta"] = beta_;
  doc["growth"] = growth_to_json(growth_);
  return doc.dump();
}

ProcessFamily ProcessFamily::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("ProcessFamily: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("family"))
    throw ConfigError("ProcessFamily: expected object with \"family\"");
  const std::string family = doc["family"].get<std::string>();
  const double beta = doc.value("beta", 2.0);
  GrowthRegime growth = doc.contains("growth") ? growth_from_json(doc["growth"])
                                               : GrowthRegime::polynomial();
  auto check_fields = [&](std::initializer_list<const char*> allowed) {
    for (auto& [key, v] : doc.items()) {
      bool ok = key == "family" || key == "beta" || key == "growth";
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError("ProcessFamily: unknown field \"" + key + "\"");
    }
  };
  auto expr = [&](const char* field, const char* fallback) {
    return Expression::parse(doc.contains(field) ? doc[field].get<std::string>()
                                                 : std::string(fallback));
  };
  if (family == "uniform_interval") {
    check_fields({"mu", "sigma"});
    return uniform_interval(expr("mu", "0"), expr("sigma", "1"), beta, growth);
  }
  if (family == "scale_shift") {
    check_fields({"base", "sigma", "mu"});
    if (!doc.contains("base")) throw ConfigError("scale_shift: missing base");
    return scale_shift(base_from_json(doc["base"]), expr("sigma", "1"), expr("mu", "0"),
                       beta, growth);
  }
  if (family == "conv_power") {
    check_fields({"base"});
    if (!doc.contains("base")) throw ConfigError("conv_power: missing base");
    return conv_power(base_from_json(doc["base"]), beta, growth);
  }
  if (family == "uniform_integers") {
    check_fields({"lo", "hi"});
    return uniform_integers(expr("lo", "0"), expr("hi", "0"), beta, growth);
  }
  if (family == "poisson") {
    check_fields({"lambda"});
    return poisson(expr("lambda", "1"), beta, growth);
  }
  throw ConfigError("ProcessFamily: unknown family \"" + family + "\"");
}

}  // namespace rfs
