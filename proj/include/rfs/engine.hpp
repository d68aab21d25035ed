#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rfs/coefficients.hpp"
#include "rfs/fourier.hpp"
#include "rfs/hypotheses.hpp"
#include "rfs/processes.hpp"

namespace rfs {

// A seeded draw of the whole process: materialized X_0..X_N (extendable,
// append-only) plus the data needed to evaluate partial sums of
//   F(alpha) = sum_k a_k f(alpha X_k).
class SeriesRealization {
 public:
  SeriesRealization(std::uint64_t seed, ProcessFamily p, CoefficientSequence a,
                    FourierFunction f);

  std::uint64_t seed() const { return seed_; }
  const ProcessFamily& process() const { return p_; }
  const CoefficientSequence& coefficients() const { return a_; }
  const FourierFunction& function() const { return f_; }

  // Extends the cache through index n; existing entries never change.
  void ensure(std::uint64_t n) const;
  double x(std::uint64_t k) const;

  // S_n(alpha) = sum_{k=0}^n a_k f(alpha X_k), compensated accumulation.
  std::complex<double> partial_sum(std::uint64_t n, double alpha) const;

  // sum_{k=0}^n a_k [f(alpha X_k) - E f(alpha X_k)].
  std::complex<double> centered_partial_sum(std::uint64_t n, double alpha) const;

 private:
  std::uint64_t seed_;
  ProcessFamily p_;
  CoefficientSequence a_;
  FourierFunction f_;
  mutable std::vector<double> x_cache_;
};

struct CauchyProfileEntry {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double sup = 0.0;    // grid max of |S_m - S_n|
  double guard = 0.0;  // Lipschitz inter-grid oscillation bound
};

struct ConvergenceDiagnostics {
  std::vector<CauchyProfileEntry> cauchy_profile;
  HypothesisVerdict verdict = HypothesisVerdict::inconclusive;
  double trend_slope = 0.0;
};

// Default checkpoints 2^5..2^14.
std::vector<std::uint64_t> default_checkpoints();

// Records, for consecutive checkpoints n < m, the alpha-grid sup of
// |S_m - S_n| (plain or centered); verdict by the log-log trend rule.
ConvergenceDiagnostics cauchy_diagnostic(const SeriesRealization& r,
                                         const CompactWindow& window,
                                         const std::vector<std::uint64_t>& checkpoints,
                                         bool centered);

// max over alpha_list of |centered S_n(alpha)| / (|||f||| sqrt(log(|alpha|+2))),
// an empirical lower estimate of the constant in the log-weighted sup bound.
double log_bound_ratio(const SeriesRealization& r, const std::vector<double>& alpha_list,
                       std::uint64_t n);

// Per-alpha version for bound scans and the flatness regression.
std::vector<std::pair<double, double>> log_bound_scan(const SeriesRealization& r,
                                                      const std::vector<double>& alpha_list,
                                                      std::uint64_t n);

struct SupStatGrid {
  std::vector<std::uint64_t> lambdas;  // block starts (>= 1)
  std::vector<std::uint64_t> Lambdas;  // block ends; pairs with lambda <= Lambda
  std::vector<std::int64_t> j_values;  // nonzero frequencies
  std::uint32_t alpha_points = 128;    // grid on [-M, M]

  static SupStatGrid dyadic(std::uint64_t Lambda_max, std::int64_t j_max,
                            std::uint32_t alpha_points);
  SupStatGrid doubled() const;  // strictly refines every dimension
};

// Monte-Carlo average over seeds of the grid max of
//   |sum_{k=l}^{L} a_k [exp(2 i pi a j X_k) - phi_k(j a)]|
//     / sqrt(A^2_{l,L,M} log(|j|+3)),
// with A^2 = log(M Phi_beta(L)) sum_{k=l}^{L} |a_k|^2.
double normalized_sup_stat(const ProcessFamily& p, const CoefficientSequence& a, double M,
                           const SupStatGrid& grid,
                           const std::vector<std::uint64_t>& seeds);

// sqrt(int_0^T |F - EF|^2) / sqrt(T log T) at truncation n, trapezoid
// quadrature; recorded for T in {10, 100, 1000} style sweeps.
double energy_growth_stat(const SeriesRealization& r, double T, std::uint64_t n,
                          std::uint32_t quad_points);

}  // namespace rfs
