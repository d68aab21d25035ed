// Acceptance suite: nine end-to-end criteria, one [PASS]/[FAIL] line each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "rfs/cli.hpp"
#include "rfs/coefficients.hpp"
#include "rfs/counterexample.hpp"
#include "rfs/engine.hpp"
#include "rfs/errors.hpp"
#include "rfs/kahan.hpp"
#include "rfs/processes.hpp"
#include "rfs/rng.hpp"
#include "rfs/util.hpp"

namespace fs = std::filesystem;
using namespace rfs;
using cplx = std::complex<double>;

namespace {

struct Failure {
  std::string reason;
};

void require(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

double slope_of(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------- 1
void criterion_cf_exactness() {
  const std::vector<Law> laws = {
      Law{UniformInterval{0.0, 1.0}},
      Law{UniformInterval{-0.3, 2.0}},
      Law{ScaleShift{StandardGaussian{}, 1.0, 0.0}},
      Law{ScaleShift{StandardGaussian{}, 1.5, -0.2}},
      Law{ScaleShift{Laplace{0.7}, 1.2, 0.3}},
      Law{ScaleShift{Exponential{2.0}, 1.0, 0.5}},
      Law{ConvPower{StandardGaussian{}, 3}},
      Law{ConvPower{Exponential{1.5}, 2}},
      Law{UniformIntegers{-3, 7}},
      Law{PoissonLaw{2.5}},
  };
  const int n_t = 20;
  const std::uint64_t n_draws = 100000;
  std::vector<double> worst(laws.size(), 0.0);
  parallel_for(laws.size(), [&](std::size_t li) {
    RandomStream t_rng(2024, li);
    for (int ti = 0; ti < n_t; ++ti) {
      const double t = 6.0 * t_rng.u01() - 3.0;
      RandomStream rng(777, li * 1000 + static_cast<std::uint64_t>(ti));
      KahanComplex mean;
      for (std::uint64_t d = 0; d < n_draws; ++d) {
        const double x = sample(laws[li], rng);
        const double theta = 2.0 * M_PI * t * x;
        mean += cplx(std::cos(theta), std::sin(theta));
      }
      const cplx mc = mean.value() / static_cast<double>(n_draws);
      worst[li] = std::max(worst[li], std::abs(mc - char_fn(laws[li], t)));
    }
  });
  for (std::size_t li = 0; li < laws.size(); ++li)
    require(worst[li] <= 0.016,
            fmt::format("law family {}: Monte-Carlo CF error {} > 0.016", li, worst[li]));
}

// ---------------------------------------------------------------------- 2
void criterion_condition_classification() {
  // exact rule on a 50-point (delta, gamma) grid: 10 polynomial deltas plus
  // a 10 x 4 subexponential grid
  for (int di = 1; di <= 10; ++di) {
    const double delta = 0.1 * di;
    const auto v =
        CoefficientSequence::power_law(delta).check_condition(GrowthRegime::polynomial());
    require((v.verdict == Verdict::holds) == (delta > 0.5),
            fmt::format("polynomial delta {} misclassified", delta));
    require(v.verdict != Verdict::inconclusive, "power law must classify exactly");
  }
  for (int di = 1; di <= 10; ++di) {
    for (double gamma : {0.2, 0.5, 0.8, 0.9}) {
      const double delta = 0.1 * di;
      const auto v = CoefficientSequence::power_law(delta).check_condition(
          GrowthRegime::subexponential(gamma));
      require((v.verdict == Verdict::holds) == (delta > (gamma + 1.0) / 2.0),
              fmt::format("subexponential delta {} gamma {} misclassified", delta, gamma));
    }
  }

  // numeric trend: partial sums of sqrt(truncated tail energy) / weight up to
  // 1e5 vs 1e6 terms; divergent cases keep growing, convergent ones flatten
  const std::uint64_t H1 = 100000, H2 = 1000000;
  auto partial_sum_at = [](double delta, bool poly, double gamma, std::uint64_t H) {
    std::vector<double> suffix(H + 2, 0.0);
    for (std::uint64_t k = H; k >= 1; --k)
      suffix[k] = suffix[k + 1] + std::pow(static_cast<double>(k), -2.0 * delta);
    KahanReal s;
    for (std::uint64_t n = 2; n <= H; ++n) {
      const double nd = static_cast<double>(n);
      const double weight =
          poly ? nd * std::sqrt(std::log(nd)) : std::pow(nd, 1.0 - gamma / 2.0);
      s += std::sqrt(suffix[n]) / weight;
    }
    return s.value();
  };
  auto trend_ratio = [&](double delta, bool poly, double gamma) {
    return partial_sum_at(delta, poly, gamma, H2) /
           partial_sum_at(delta, poly, gamma, H1);
  };
  // representative exponents: delta = 0.5 sits on the divergent boundary while
  // delta = 0.9 converges fast enough for the 1e5 -> 1e6 horizon comparison
  // (near the boundary the series converges but too slowly to flatten here)
  const double r_poly_fail = trend_ratio(0.5, true, 0.0);
  const double r_poly_hold = trend_ratio(0.9, true, 0.0);
  const double r_sub_fail = trend_ratio(0.6, false, 0.5);
  const double r_sub_hold = trend_ratio(0.9, false, 0.2);
  require(r_poly_fail > 1.1,
          fmt::format("divergent polynomial sum ratio {} not growing", r_poly_fail));
  require(r_sub_fail > 1.1,
          fmt::format("divergent subexponential sum ratio {} not growing", r_sub_fail));
  require(r_poly_hold < 1.05,
          fmt::format("convergent polynomial sum ratio {} still growing", r_poly_hold));
  require(r_sub_hold < 1.05,
          fmt::format("convergent subexponential sum ratio {} still growing", r_sub_hold));
}

// ---------------------------------------------------------------------- 3
void criterion_abel_identity() {
  RandomStream rng(31337, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t m = 5 + static_cast<std::uint64_t>(rng.u01() * 55.0);
    const std::uint64_t n = 1 + static_cast<std::uint64_t>(rng.u01() * double(m - 2));
    std::vector<cplx> a(m + 1), b(m + 1);
    for (std::uint64_t k = 0; k <= m; ++k) {
      a[k] = cplx(2.0 * rng.u01() - 1.0, 2.0 * rng.u01() - 1.0);
      b[k] = cplx(2.0 * rng.u01() - 1.0, 2.0 * rng.u01() - 1.0);
    }
    std::vector<cplx> Phi(m + 2, 0.0);  // Phi[p] = sum_{k<p} b_k
    for (std::uint64_t k = 0; k <= m; ++k) Phi[k + 1] = Phi[k] + b[k];
    KahanComplex lhs;
    for (std::uint64_t k = n; k <= m; ++k) lhs += a[k] * b[k];
    KahanComplex rhs;
    rhs += a[m] * Phi[m + 1];
    rhs += -a[n] * Phi[n];
    for (std::uint64_t k = n + 1; k <= m; ++k) rhs += (a[k - 1] - a[k]) * Phi[k];
    const double scale = std::max(1.0, std::abs(lhs.value()));
    require(std::abs(lhs.value() - rhs.value()) <= 1e-12 * scale,
            fmt::format("trial {}: summation-by-parts identity off by {}", trial,
                        std::abs(lhs.value() - rhs.value()) / scale));
  }
}

// ---------------------------------------------------------------------- 4
void criterion_counterexample_integral() {
  double prev = 0.0;
  for (std::uint64_t k : {10, 50, 200}) {
    const auto Q = static_cast<std::uint32_t>(32 * (2 * k + 1));
    const double quad = dirichlet_integral(k, Q);
    const double exact = dirichlet_integral_exact(k);
    require(std::fabs(quad - exact) <= 1e-4,
            fmt::format("I_{}: quadrature {} vs closed form {}", k, quad, exact));
    require(quad > prev, fmt::format("I_{} = {} not increasing", k, quad));
    prev = quad;
  }
  require(prev >= 0.9, fmt::format("I_200 = {} below 0.9", prev));

  CounterexampleConfig cfg;
  cfg.k_max = 20;
  const auto id = l2_identity_check(cfg, 42);
  require(std::fabs(id.lhs - id.rhs) / id.rhs <= 1e-6,
          fmt::format("decoupling identity: lhs {} vs rhs {}", id.lhs, id.rhs));
}

// ---------------------------------------------------------------------- 5
void criterion_divergence_contrast() {
  CounterexampleConfig divergent;
  divergent.a = CoefficientSequence::power_law(0.5);
  divergent.k_max = 1000;
  const auto grow = divergence_profile(divergent, {1, 2, 3}, {1000});
  require(grow.front().second > 3.0,
          fmt::format("divergent case: L2 mass {} <= 3 at k_max 1000",
                      grow.front().second));

  CounterexampleConfig control;
  control.a = CoefficientSequence::power_law(1.0);
  control.k_max = 1000;
  const auto flat = divergence_profile(control, {1, 2, 3}, {1000});
  require(flat.front().second < M_PI * M_PI / 6.0 + 0.01,
          fmt::format("control case: L2 mass {} above pi^2/6 + 0.01",
                      flat.front().second));
}

// ---------------------------------------------------------------------- 6
void criterion_cauchy_decay() {
  const auto p = ProcessFamily::scale_shift(StandardGaussian{},
                                            Expression::parse("3*sqrt(log(k+2))"),
                                            Expression::parse("0"));
  const auto a = CoefficientSequence::power_law(0.8);
  const auto f = FourierFunction({{1, 1.0}, {-1, 1.0}});
  const CompactWindow window{1.0, 2.0, 513, 1, 0.0};
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SeriesRealization r(seed, p, a, f);
    const auto diag = cauchy_diagnostic(r, window, default_checkpoints(), true);
    // decrease is judged by the diagnostic's trend rule, whose fit window (the
    // second half of the 9-entry profile) is exactly the last 5 entries;
    // pairwise strictness on disjoint-block sups would be defeated by the
    // independent fluctuations of each block's grid maximum
    if (diag.verdict == HypothesisVerdict::certified_bounded) ++good;
  }
  require(good >= 9,
          fmt::format("Cauchy profile tail certified decreasing for only {}/10 seeds", good));
}

// ---------------------------------------------------------------------- 7
void criterion_log_bound_flatness() {
  const auto p = ProcessFamily::scale_shift(StandardGaussian{}, Expression::parse("1"),
                                            Expression::parse("0"));
  const auto a = CoefficientSequence::power_law(1.0);
  const auto f = FourierFunction({{1, 1.0}, {-1, 1.0}});
  const std::uint64_t n = 4096;
  const double alpha_max = 10000.0;
  const std::size_t n_alpha = 4096;
  std::vector<double> alphas(n_alpha);
  for (std::size_t i = 0; i < n_alpha; ++i)
    alphas[i] = alpha_max * static_cast<double>(i + 1) / static_cast<double>(n_alpha);
  const std::vector<double> horizons = {16,   32,   64,   128,  256,  512,
                                        1024, 2048, 4096, 8192, 10000};

  // per horizon A: running max of |centered S_n| over |alpha| <= A, normalized
  // by |||f||| sqrt(log(A + 2)); averaged across seeds, the curve is flat
  std::vector<double> mean_R(horizons.size(), 0.0);
  const int n_seeds = 10;
  for (int seed = 1; seed <= n_seeds; ++seed) {
    const SeriesRealization r(static_cast<std::uint64_t>(seed), p, a, f);
    const auto scan = log_bound_scan(r, alphas, n);
    double running = 0.0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < scan.size() && hi < horizons.size(); ++i) {
      const auto& [alpha, ratio] = scan[i];
      if (alpha > horizons[hi]) {
        mean_R[hi] += running / std::sqrt(std::log(horizons[hi] + 2.0));
        ++hi;
      }
      running = std::max(running,
                         ratio * std::sqrt(std::log(std::fabs(alpha) + 2.0)));
    }
    while (hi < horizons.size()) {
      mean_R[hi] += running / std::sqrt(std::log(horizons[hi] + 2.0));
      ++hi;
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
    xs.push_back(std::sqrt(std::log(horizons[hi] + 2.0)));
    ys.push_back(mean_R[hi] / n_seeds);
  }
  const double slope = slope_of(xs, ys);
  require(std::fabs(slope) <= 0.05,
          fmt::format("log-bound ratio trend slope {} outside [-0.05, 0.05]", slope));
}

// ---------------------------------------------------------------------- 8
void criterion_sup_stat_stability() {
  const auto p = ProcessFamily::scale_shift(StandardGaussian{}, Expression::parse("1"),
                                            Expression::parse("0"));
  const auto a = CoefficientSequence::power_law(0.8);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 64; ++s) seeds.push_back(s);
  const auto grid = SupStatGrid::dyadic(1024, 64, 65);
  const double base = normalized_sup_stat(p, a, 1.0, grid, seeds);
  const double fine = normalized_sup_stat(p, a, 1.0, grid.doubled(), seeds);
  require(base > 0.0, "sup statistic vanished");
  require(std::fabs(fine - base) < 0.25 * base,
          fmt::format("sup statistic moved from {} to {} (>= 25%) under grid doubling",
                      base, fine));
}

// ---------------------------------------------------------------------- 9
void criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "rfslab_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "simulate.json");
    cfg << R"json({"process": {"family": "scale_shift", "base": {"kind": "gaussian"},
                               "sigma": "3*sqrt(log(k+2))", "mu": "0"},
                   "coefficients": {"kind": "power_law", "delta": 0.8},
                   "function": {"coeffs": [{"j": 1, "re": 1, "im": 0},
                                           {"j": -1, "re": 1, "im": 0}]},
                   "window": {"lo": 1.0, "hi": 2.0, "grid_points": 129, "j_max": 1},
                   "checkpoints": [32, 64, 128, 256], "centered": true})json";
  }
  auto run_into = [&](const std::string& command, const std::string& config,
                      const std::string& overrides, const fs::path& out,
                      unsigned threads) {
    RunManifest m;
    m.command = command;
    m.config_path = config;
    m.output_dir = out.string();
    m.overrides = overrides;
    m.threads = threads;
    require(rfs::run(m) == 0, fmt::format("{} run into {} failed", command, out.string()));
  };
  run_into("simulate", (root / "simulate.json").string(), "{}", root / "sim_a", 0);
  run_into("simulate", (root / "simulate.json").string(), "{}", root / "sim_b", 3);
  run_into("counterexample", "", R"({"kmax": 5})", root / "ce_a", 0);
  run_into("counterexample", "", R"({"kmax": 5})", root / "ce_b", 2);

  auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& [a, b] :
       std::vector<std::pair<fs::path, fs::path>>{{root / "sim_a", root / "sim_b"},
                                                  {root / "ce_a", root / "ce_b"}}) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a))
      names.push_back(entry.path().filename());
    require(!names.empty(), fmt::format("no artifacts emitted in {}", a.string()));
    for (const auto& name : names)
      require(slurp(a / name) == slurp(b / name),
              fmt::format("artifact {} differs between identical runs", name.string()));
  }
  fs::remove_all(root);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> body;
  };
  const std::vector<Criterion> criteria = {
      {"criterion 1: characteristic functions match Monte-Carlo means",
       criterion_cf_exactness},
      {"criterion 2: convergence conditions classified exactly with numeric trends",
       criterion_condition_classification},
      {"criterion 3: summation-by-parts identity exact on random data",
       criterion_abel_identity},
      {"criterion 4: oscillation integrals approach full mass, decoupling exact",
       criterion_counterexample_integral},
      {"criterion 5: L2 mass diverges at delta=1/2, bounded at delta=1",
       criterion_divergence_contrast},
      {"criterion 6: centered Cauchy profiles decay in the contraction regime",
       criterion_cauchy_decay},
      {"criterion 7: log-weighted bound ratio flat in the scan horizon",
       criterion_log_bound_flatness},
      {"criterion 8: normalized sup statistic stable under grid doubling",
       criterion_sup_stat_stability},
      {"criterion 9: identical manifests produce byte-identical artifacts",
       criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.body();
      fmt::print("[PASS] {}\n", c.name);
    } catch (const Failure& f) {
      ++failures;
      fmt::print("[FAIL] {} -- {}\n", c.name, f.reason);
    } catch (const std::exception& e) {
      ++failures;
      fmt::print("[FAIL] {} -- unexpected error: {}\n", c.name, e.what());
    }
  }
  return failures;
}
