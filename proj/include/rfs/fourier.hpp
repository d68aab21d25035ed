#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rfs {

// Periodic test function represented by finitely many Fourier coefficients,
//   f(alpha) = sum_j fhat(j) exp(2 i pi alpha j).
// Infinite-support functions enter only via truncation; the truncation error
// is bounded by the corresponding tail of the weighted norm.
class FourierFunction {
 public:
  using Coefficient = std::pair<std::int64_t, std::complex<double>>;

  FourierFunction() = default;
  // Frequencies must be distinct; zero coefficients are dropped, the rest are
  // kept sorted by frequency so evaluation order is deterministic.
  explicit FourierFunction(std::vector<Coefficient> coeffs);

  std::complex<double> evaluate(double alpha) const;

  // sum |fhat(j)|  (membership gauge for absolutely convergent series).
  double norm_A() const;
  // sum |fhat(j)| sqrt(log(|j|+3)), natural log.
  double norm_B() const;

  bool mean_zero() const;
  bool empty() const { return coeffs_.empty(); }
  const std::vector<Coefficient>& coeffs() const { return coeffs_; }

  FourierFunction operator+(const FourierFunction& other) const;

  std::string to_json() const;
  static FourierFunction from_json(const std::string& text);

 private:
  std::vector<Coefficient> coeffs_;  // sorted by frequency, all nonzero
};

}  // namespace rfs
