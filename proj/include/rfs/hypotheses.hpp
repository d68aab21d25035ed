#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rfs/coefficients.hpp"
#include "rfs/processes.hpp"

namespace rfs {

// Compact alpha-interval with grid resolution and, when required, a
// guaranteed distance from zero.
struct CompactWindow {
  double lo = 1.0;
  double hi = 2.0;
  std::uint32_t grid_points = 256;
  std::uint32_t j_max = 8;
  double exclude_zero_margin = 0.0;

  double distance_from_zero() const;
  std::vector<double> grid() const;
  double spacing() const;
  void validate(bool must_exclude_zero) const;  // throws ConfigError
};

enum class HypothesisVerdict { certified_bounded, refuted_growing, inconclusive };

struct SupWitness {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t j = 0;
  double alpha = 0.0;
};

struct HypothesisReport {
  double sup_value = 0.0;
  SupWitness attained_at;
  // (N, scanned sup over the tail window starting at N) or (N, running sup).
  std::vector<std::pair<std::uint64_t, double>> tail_profile;
  HypothesisVerdict verdict = HypothesisVerdict::inconclusive;
  std::string truncation_note;

  std::string to_json(const std::string& hypothesis_name) const;
};

struct HypothesisScanConfig {
  CompactWindow window;
  std::vector<std::uint64_t> N_range = {8, 16, 32, 64, 128};
  std::uint64_t m_cap = 256;
  double epsilon = 1e-2;  // the epsilon in the tail-smallness hypothesis
};

// Tail-smallness of sup_{m>n>=N} sup_alpha sup_j |sum_{k=n}^m a_k phi_k(j a)|.
HypothesisReport check_H(const CoefficientSequence& a, const ProcessFamily& p,
                         const HypothesisScanConfig& cfg);

// Boundedness of the unweighted partial sums sup_N |sum_{k=0}^N phi_k(j a)|.
HypothesisReport check_Hprime(const ProcessFamily& p, const CompactWindow& window,
                              std::uint64_t N_max);

// Tail-smallness of the squared-modulus sums sum_{k=n}^m |phi_k(j a)|^2.
HypothesisReport check_Hsecond(const ProcessFamily& p, const HypothesisScanConfig& cfg);

// Abel-summation bound on |sum_{k=n}^m a_k phi_k(j a)|:
//   [|a_m| + |a_n| + sum_{k=n+1}^m |a_k - a_{k-1}|] * sup |phi_N(j a)|
// where phi_N is the partial-sum function of the CFs. The Abel identity
// itself is asserted exactly on the given range at sampled grid points.
double abel_split_bound(const CoefficientSequence& a, const ProcessFamily& p,
                        const CompactWindow& window, std::uint64_t n, std::uint64_t m);

struct ConvolutionBound {
  double scanned_sup = 0.0;       // sup over N,t,j of |sum_{k=1}^N phi(jt)^k|
  double low_j_bound = 0.0;       // analytic bound on the small-|j| block
  double high_j_bound = 0.0;      // geometric bound on the large-|j| block
  double q_scanned = 0.0;         // scanned sup of |t|^delta |phi(t)|
  SupWitness attained_at;
};

// Geometric-sum bound for convolution-power laws: validates aperiodicity and
// the q-envelope on a scan, then compares the scanned sup of
// |sum_{k=1}^N phi(jt)^k| against the low-j/high-j analytic split.
ConvolutionBound convolution_geometric_bound(const BaseLaw& base,
                                             const CompactWindow& window, double delta,
                                             double q, std::uint64_t N_max);

}  // namespace rfs
