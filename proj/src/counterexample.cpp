#include "rfs/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <fmt/core.h>

#include "rfs/errors.hpp"
#include "rfs/kahan.hpp"
#include "rfs/processes.hpp"
#include "rfs/util.hpp"

namespace rfs {

std::uint32_t min_quadrature_points(std::uint64_t k) {
  return static_cast<std::uint32_t>(8 * (2 * k + 1));
}

double dirichlet_integral(std::uint64_t k, std::uint32_t quadrature_points) {
  if (quadrature_points < min_quadrature_points(k))
    throw QuadratureUnderResolved(fmt::format(
        "dirichlet_integral: {} points cannot resolve the kernel at k = {} "
        "(minimum {})", quadrature_points, k, min_quadrature_points(k)));
  if (k == 0) return 0.0;
  // Periodic integrand: the trapezoid rule is the plain sample mean.
  const std::uint32_t Q = quadrature_points;
  KahanReal acc;
  for (std::uint32_t i = 0; i < Q; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(Q);
    const double d = char_fn_modulus_uniform_integers(k, alpha);
    acc += (1.0 - d) * (1.0 - d);
  }
  return acc.value() / static_cast<double>(Q);
}

double dirichlet_integral_exact(std::uint64_t k) {
  if (k == 0) return 0.0;
  const auto n = static_cast<double>(2 * k + 1);
  // |D_k| = |r| with r(alpha) = n^-1 sum_{|m|<=k} e^{2 i pi m alpha}, a real
  // kernel whose sign changes exactly at alpha = i/n. Expand (1 - |r|)^2:
  // integral of r^2 is 1/n by Parseval; integral of |r| is the sum of the
  // absolute piecewise integrals between consecutive zeros.
  KahanReal abs_integral;
  for (std::uint64_t i = 0; i < 2 * k + 1; ++i) {
    const double a = static_cast<double>(i) / n;
    const double b = static_cast<double>(i + 1) / n;
    KahanReal piece;
    piece += b - a;
    for (std::uint64_t m = 1; m <= k; ++m) {
      const double md = static_cast<double>(m);
      piece += (std::sin(2.0 * M_PI * md * b) - std::sin(2.0 * M_PI * md * a)) /
               (M_PI * md);
    }
    abs_integral += std::fabs(piece.value() / n);
  }
  return 1.0 - 2.0 * abs_integral.value() + 1.0 / n;
}

namespace {

struct PreparedScan {
  std::vector<Law> laws;       // index 0..k_max (law 0 is the point mass at 0)
  std::uint32_t Q = 0;
};

PreparedScan prepare(const CounterexampleConfig& config, bool exact_quadrature) {
  if (config.k_max < 1) throw ConfigError("counterexample: k_max >= 1 required");
  PreparedScan prep;
  const ProcessFamily p = ProcessFamily::counterexample_integers();
  prep.laws.reserve(config.k_max + 1);
  for (std::uint64_t k = 0; k <= config.k_max; ++k) prep.laws.push_back(p.law_at(k));

  const std::uint32_t min_Q = min_quadrature_points(config.k_max);
  if (config.quadrature_points != 0) {
    if (config.quadrature_points < min_Q)
      throw QuadratureUnderResolved(fmt::format(
          "counterexample: {} points below the minimum {} for k_max = {}",
          config.quadrature_points, min_Q, config.k_max));
    prep.Q = config.quadrature_points;
  } else if (exact_quadrature) {
    // Exact trapezoid for trig polynomials: the integrands carry frequencies
    // up to 2 ((k_max+1)^2 - 1).
    const std::uint64_t f_max = (config.k_max + 1) * (config.k_max + 1) - 1;
    prep.Q = static_cast<std::uint32_t>(std::max<std::uint64_t>(2 * f_max + 9, min_Q));
  } else {
    prep.Q = std::max<std::uint32_t>(64 * static_cast<std::uint32_t>(2 * config.k_max + 1),
                                     min_Q);
  }
  return prep;
}

}  // namespace

L2Identity l2_identity_check(const CounterexampleConfig& config, std::uint64_t seed) {
  const PreparedScan prep = prepare(config, /*exact_quadrature=*/true);
  const ProcessFamily p = ProcessFamily::counterexample_integers();
  std::vector<double> xs(config.k_max + 1, 0.0);
  for (std::uint64_t k = 1; k <= config.k_max; ++k) xs[k] = p.sample(seed, k, 0);

  const std::uint32_t Q = prep.Q;
  std::vector<double> lhs_samples(Q, 0.0);
  std::vector<std::vector<double>> per_alpha_rhs(Q);
  parallel_for(Q, [&](std::size_t i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(Q);
    KahanComplex g;
    std::vector<double> rhs_row(config.k_max + 1, 0.0);
    for (std::uint64_t k = 1; k <= config.k_max; ++k) {
      const std::complex<double> ak = config.a.at(k);
      const double theta = 2.0 * M_PI * alpha * xs[k];
      const std::complex<double> term =
          std::complex<double>(std::cos(theta), std::sin(theta)) -
          char_fn(prep.laws[k], alpha);
      g += ak * term;
      rhs_row[k] = std::norm(term);
    }
    lhs_samples[i] = std::norm(g.value());
    per_alpha_rhs[i] = std::move(rhs_row);
  });

  L2Identity out;
  KahanReal lhs;
  for (double v : lhs_samples) lhs += v;
  out.lhs = lhs.value() / static_cast<double>(Q);
  KahanReal rhs;
  for (std::uint64_t k = 1; k <= config.k_max; ++k) {
    KahanReal per_k;
    for (std::uint32_t i = 0; i < Q; ++i) per_k += per_alpha_rhs[i][k];
    rhs += std::norm(config.a.at(k)) * per_k.value() / static_cast<double>(Q);
  }
  out.rhs = rhs.value();
  return out;
}

double l2_mass_exact(const CoefficientSequence& a, std::uint64_t k_max) {
  // e^{2 i pi alpha X_k} - phi_k has Fourier coefficient 1 - 1/(2k+1) at the
  // drawn integer and -1/(2k+1) at the other 2k support points, so by
  // Parseval the per-index integral is 2k/(2k+1) regardless of the draw.
  KahanReal acc;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const auto n = static_cast<double>(2 * k + 1);
    acc += std::norm(a.at(k)) * (n - 1.0) / n;
  }
  return acc.value();
}

std::vector<std::pair<std::uint64_t, double>> divergence_profile(
    const CounterexampleConfig& config, const std::vector<std::uint64_t>& seeds,
    const std::vector<std::uint64_t>& k_checkpoints) {
  if (seeds.empty()) throw ConfigError("divergence_profile: no seeds");
  std::vector<std::uint64_t> cps = k_checkpoints;
  std::sort(cps.begin(), cps.end());
  if (cps.empty() || cps.front() < 1 || cps.back() > config.k_max)
    throw ConfigError("divergence_profile: checkpoints must lie in [1, k_max]");

  const PreparedScan prep = prepare(config, /*exact_quadrature=*/false);
  const ProcessFamily p = ProcessFamily::counterexample_integers();
  const std::uint32_t Q = prep.Q;

  std::vector<std::vector<double>> per_seed_lhs(seeds.size(),
                                                std::vector<double>(cps.size(), 0.0));
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    std::vector<double> xs(config.k_max + 1, 0.0);
    for (std::uint64_t k = 1; k <= config.k_max; ++k) xs[k] = p.sample(seeds[si], k, 0);

    std::vector<std::vector<double>> recorded(Q, std::vector<double>(cps.size(), 0.0));
    parallel_for(Q, [&](std::size_t i) {
      const double alpha = static_cast<double>(i) / static_cast<double>(Q);
      KahanComplex g;
      std::size_t ci = 0;
      for (std::uint64_t k = 1; k <= cps.back(); ++k) {
        const std::complex<double> ak = config.a.at(k);
        const double theta = 2.0 * M_PI * alpha * xs[k];
        g += ak * (std::complex<double>(std::cos(theta), std::sin(theta)) -
                   char_fn(prep.laws[k], alpha));
        while (ci < cps.size() && k == cps[ci]) recorded[i][ci++] = std::norm(g.value());
      }
    });
    for (std::size_t ci = 0; ci < cps.size(); ++ci) {
      KahanReal acc;
      for (std::uint32_t i = 0; i < Q; ++i) acc += recorded[i][ci];
      per_seed_lhs[si][ci] = acc.value() / static_cast<double>(Q);
    }
  }

  std::vector<std::pair<std::uint64_t, double>> profile(cps.size());
  for (std::size_t ci = 0; ci < cps.size(); ++ci) {
    std::vector<double> vals;
    vals.reserve(seeds.size());
    for (const auto& row : per_seed_lhs) vals.push_back(row[ci]);
    std::sort(vals.begin(), vals.end());
    const std::size_t n = vals.size();
    const double median =
        n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    profile[ci] = {cps[ci], median};
  }
  return profile;
}

}  // namespace rfs
