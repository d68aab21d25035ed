#pragma once

#include <cstdint>
#include <vector>

#include "rfs/coefficients.hpp"

namespace rfs {

// The optimality construction: X_k uniform on the 2k+1 integers of
// [k^2, (k+1)^2 - 1], pairwise disjoint supports covering the integers >= 1,
// Dirichlet-kernel characteristic function, and the L2 identity that breaks
// uniform convergence whenever sum |a_k|^2 diverges.

struct CounterexampleConfig {
  CoefficientSequence a = CoefficientSequence::power_law(0.5);
  std::uint64_t k_max = 200;
  // 0 = choose automatically (at least 8*(2k+1), raised until the trig
  // polynomials involved are integrated exactly).
  std::uint32_t quadrature_points = 0;
};

// Minimum resolution accepted for the oscillation at index k.
std::uint32_t min_quadrature_points(std::uint64_t k);

// I_k = int_0^1 (1 - D_k(alpha))^2 d alpha, composite trapezoid.
// Throws QuadratureUnderResolved below the minimum resolution.
double dirichlet_integral(std::uint64_t k, std::uint32_t quadrature_points);

// Exact-summation oracle: expands (1 - |r|)^2 with
// r(alpha) = (2k+1)^-1 sum_{|m|<=k} e^{2 i pi m alpha} over the finite
// frequency set and integrates piecewise between the kernel's sign changes.
double dirichlet_integral_exact(std::uint64_t k);

struct L2Identity {
  double lhs = 0.0;  // int_0^1 |sum_k a_k (e^{2 i pi a X_k} - phi_k)|^2
  double rhs = 0.0;  // sum_k |a_k|^2 int_0^1 |e^{2 i pi a X_k} - phi_k|^2
};

// Quadrature check of the decoupling identity for one seeded draw; the
// disjoint supports make the cross terms vanish exactly.
L2Identity l2_identity_check(const CounterexampleConfig& config, std::uint64_t seed);

// Exact value of both sides via Parseval over the finite frequency set
// (independent of the draw: per-k integral is 2k/(2k+1)).
double l2_mass_exact(const CoefficientSequence& a, std::uint64_t k_max);

// (k_max, median over seeds of lhs) along the checkpoint list; grows without
// bound when sum |a_k|^2 diverges, converges when it is square-summable.
std::vector<std::pair<std::uint64_t, double>> divergence_profile(
    const CounterexampleConfig& config, const std::vector<std::uint64_t>& seeds,
    const std::vector<std::uint64_t>& k_checkpoints);

}  // namespace rfs
