#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rfs/coefficients.hpp"
#include "rfs/expr.hpp"
#include "rfs/fourier.hpp"
#include "rfs/rng.hpp"

namespace rfs {

// Characteristic function convention, fixed once for the whole project:
//   phi_X(t) = E exp(2 i pi t X).
// Under this convention the standard Gaussian gives exp(-2 pi^2 t^2).

struct StandardGaussian {};
struct Exponential {
  double lambda = 1.0;
};
struct CauchyLaw {
  double scale = 1.0;
};
struct Laplace {
  double scale = 1.0;
};
struct PointMassMixture {
  std::vector<double> points;
  std::vector<double> probs;  // must sum to 1
};

using BaseLaw = std::variant<StandardGaussian, Exponential, CauchyLaw, Laplace,
                             PointMassMixture>;

struct UniformInterval {
  double mu = 0.0;
  double sigma = 1.0;  // > 0; support [mu - sigma/2, mu + sigma/2]
};
struct ScaleShift {
  BaseLaw base;
  double sigma = 1.0;
  double mu = 0.0;  // law of sigma*X + mu
};
struct ConvPower {
  BaseLaw base;
  std::uint64_t k = 1;  // k-fold convolution power; k = 0 is the point mass at 0
};
struct UniformIntegers {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // lo <= hi
};
struct PoissonLaw {
  double lambda = 1.0;
};

using Law = std::variant<UniformInterval, ScaleShift, ConvPower, UniformIntegers,
                         PoissonLaw>;

// One draw from the law. Deterministic given (seed, k, draw) through the
// counter-based stream.
double sample(const Law& law, RandomStream& rng);
double sample(const BaseLaw& base, RandomStream& rng);

// Exact closed-form characteristic function, singularities handled
// analytically.
std::complex<double> char_fn(const Law& law, double t);
std::complex<double> char_fn(const BaseLaw& base, double t);

// Dirichlet-kernel modulus of the uniform law on the 2k+1 integers of
// [k^2, (k+1)^2 - 1]:  |sin(pi a (2k+1))| / ((2k+1) |sin(pi a)|), value 1 at
// integer a.
double char_fn_modulus_uniform_integers(std::uint64_t k, double alpha);

// E |X|^beta, closed form where available, adaptive quadrature otherwise.
// Throws InfiniteMoment when the moment diverges (Cauchy with beta >= 1).
double abs_moment(const Law& law, double beta);
double abs_moment(const BaseLaw& base, double beta);

// E |X|, or nullopt when infinite (Cauchy). Used by Lipschitz grid guards.
std::optional<double> abs_mean(const Law& law);

// Per-index law of the independent process (X_k) plus the moment gauge
// parameters. law_at is deterministic in k.
class ProcessFamily {
 public:
  enum class FamilyKind {
    uniform_interval,
    scale_shift,
    conv_power,
    uniform_integers,
    poisson,
  };

  static ProcessFamily uniform_interval(Expression mu, Expression sigma, double beta = 2.0,
                                        GrowthRegime growth = GrowthRegime::polynomial());
  static ProcessFamily scale_shift(BaseLaw base, Expression sigma, Expression mu,
                                   double beta = 2.0,
                                   GrowthRegime growth = GrowthRegime::polynomial());
  static ProcessFamily conv_power(BaseLaw base, double beta = 2.0,
                                  GrowthRegime growth = GrowthRegime::polynomial());
  static ProcessFamily uniform_integers(Expression lo, Expression hi, double beta = 1.0,
                                        GrowthRegime growth = GrowthRegime::polynomial());
  static ProcessFamily poisson(Expression lambda, double beta = 1.0,
                               GrowthRegime growth = GrowthRegime::polynomial());
  // The optimality construction: X_k uniform on the integers of
  // [k^2, (k+1)^2 - 1] (k >= 1; k = 0 degenerates to the point {0}).
  static ProcessFamily counterexample_integers();

  FamilyKind family() const { return family_; }
  double beta() const { return beta_; }
  const GrowthRegime& growth() const { return growth_; }
  const BaseLaw* base() const;

  Law law_at(std::uint64_t k) const;

  // One draw of X_k, reproducible from (seed, k, draw).
  double sample(std::uint64_t seed, std::uint64_t k, std::uint64_t draw = 0) const;

  // Phi_beta(N) = 2 + max(N, E|X_N|^beta).
  double moment_bound(std::uint64_t N) const;

  // E f(alpha X_k) = sum_j fhat(j) phi_{X_k}(j alpha).
  std::complex<double> mean_of_f(std::uint64_t k, const FourierFunction& f,
                                 double alpha) const;

  std::string to_json() const;
  static ProcessFamily from_json(const std::string& text);

 private:
  FamilyKind family_ = FamilyKind::uniform_interval;
  Expression p1_, p2_;  // family parameters as expressions over k
  BaseLaw base_;
  double beta_ = 2.0;
  GrowthRegime growth_;
};

}  // namespace rfs
