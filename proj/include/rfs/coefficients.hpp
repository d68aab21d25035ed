#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rfs {

// Growth class of the moment gauge: O(N^d) vs O(2^(N^gamma)), gamma in (0,1).
// The class selects the weight c_n and the block sequence N_k.
struct GrowthRegime {
  enum class Kind { polynomial, subexponential };
  Kind kind = Kind::polynomial;
  double d = 1.0;        // polynomial exponent, > 0
  double gamma = 0.5;    // subexponential exponent, in (0,1)

  static GrowthRegime polynomial(double d = 1.0);
  static GrowthRegime subexponential(double gamma);
};

// Tail energy sqrt(sum_{k>=n} |a_k|^2) with an interval enclosure from
// integral bracketing of the power-law tail.
struct TailEnergy {
  double value = 0.0;       // midpoint of the bracket
  double half_width = 0.0;  // bracket half-width (0 for closed-form cases)
  bool divergent = false;   // tail energy infinite

  double lower() const { return value - half_width; }
  double upper() const { return value + half_width; }
};

enum class Verdict { holds, fails, inconclusive };

struct ConditionReport {
  Verdict verdict = Verdict::inconclusive;
  // For explicit sequences: partial sum of the condition series up to the
  // horizon and the fitted log-log decay slope of its terms.
  double partial_sum = 0.0;
  double trend_slope = 0.0;
};

struct VariationReport {
  double partial_sum = 0.0;  // sum_{k=1}^{horizon} |a_k - a_{k+1}|
  Verdict verdict = Verdict::inconclusive;
};

// Coefficient sequence (a_k): closed-form power-law family a_k = scale*k^-delta
// (k >= 1; a_0 = 0), or an explicit finite prefix listing a_1, a_2, ... with
// a tail rule beyond it (a_0 = 0 in both cases).
class CoefficientSequence {
 public:
  enum class Kind { power_law, explicit_list };
  enum class TailRule { zero, power_law };

  static CoefficientSequence power_law(double delta, double scale = 1.0,
                                       std::string description = {});
  static CoefficientSequence explicit_list(std::vector<std::complex<double>> values,
                                           TailRule tail = TailRule::zero,
                                           double tail_delta = 0.0, double tail_scale = 0.0,
                                           std::string description = {});

  Kind kind() const { return kind_; }
  double delta() const { return delta_; }
  double scale() const { return scale_; }
  const std::string& description() const { return description_; }

  // a_k for k >= 0.
  std::complex<double> at(std::uint64_t k) const;

  // sqrt(sum_{k>=n} |a_k|^2), n >= 1. Power-law tails use direct summation of
  // a leading stretch plus the integral bracket
  //   int_n^inf x^-2d dx  <=  sum_{k>=n} k^-2d  <=  int_{n-1}^inf x^-2d dx.
  TailEnergy tail_energy(std::uint64_t n) const;
  // Same, but for the squared tail sum_{k>=n} |a_k|^2 directly.
  TailEnergy tail_energy_squared(std::uint64_t n) const;

  // Convergence condition for the chosen growth regime. Power-law sequences
  // are classified exactly: the polynomial-regime condition holds iff
  // delta > 1/2, the subexponential one iff delta > (gamma+1)/2; boundary
  // cases fail. Explicit sequences only ever
  // return inconclusive with diagnostics.
  ConditionReport check_condition(const GrowthRegime& regime,
                                  std::uint64_t horizon = 100000) const;

  // sum_{k=1}^{horizon} |a_k - a_{k+1}|, with the telescoping certificate for
  // monotone power laws.
  VariationReport total_variation(std::uint64_t horizon) const;

  std::string to_json() const;
  static CoefficientSequence from_json(const std::string& text);

 private:
  Kind kind_ = Kind::power_law;
  double delta_ = 1.0;
  double scale_ = 1.0;
  std::vector<std::complex<double>> values_;
  TailRule tail_rule_ = TailRule::zero;
  double tail_delta_ = 0.0;
  double tail_scale_ = 0.0;
  std::string description_;
};

// c_n weight: 1 + sqrt(log n) in the polynomial case, n^(gamma/2) in the
// subexponential case. n >= 2.
double weight_c(std::uint64_t n, const GrowthRegime& regime);

// Block terms sqrt(log(Phi_beta(N_{k+1})) * sum_{l=N_k+1}^{N_{k+1}} |a_l|^2)
// for k = 1..K_max, with N_k = 2^(2^k) (polynomial regime, K_max <= 5) or
// N_k = 2^k (subexponential). `phi` is the moment-growth gauge Phi_beta,
// evaluated on a real argument since the polynomial blocks outgrow uint64.
std::vector<double> check_block_criterion(const CoefficientSequence& a,
                                          const GrowthRegime& regime,
                                          const std::function<double(double)>& phi,
                                          int K_max);

}  // namespace rfs
