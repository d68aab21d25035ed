#include "rfs/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "rfs/errors.hpp"
#include "rfs/kahan.hpp"
#include "rfs/util.hpp"

namespace rfs {

double CompactWindow::distance_from_zero() const {
  if (lo <= 0.0 && hi >= 0.0) return 0.0;
  return std::min(std::fabs(lo), std::fabs(hi));
}

std::vector<double> CompactWindow::grid() const {
  std::vector<double> g;
  g.reserve(grid_points);
  if (grid_points == 1) {
    g.push_back(0.5 * (lo + hi));
    return g;
  }
  for (std::uint32_t i = 0; i < grid_points; ++i)
    g.push_back(lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(grid_points - 1));
  return g;
}

double CompactWindow::spacing() const {
  return grid_points > 1 ? (hi - lo) / static_cast<double>(grid_points - 1) : 0.0;
}

void CompactWindow::validate(bool must_exclude_zero) const {
  if (!(lo < hi)) throw ConfigError("CompactWindow: lo < hi required");
  if (grid_points < 1 || j_max < 1)
    throw ConfigError("CompactWindow: grid_points and j_max must be >= 1");
  if (must_exclude_zero && distance_from_zero() <= 0.0)
    throw ConfigError("CompactWindow: the window must not contain 0");
  if (exclude_zero_margin > 0.0 && distance_from_zero() < exclude_zero_margin)
    throw ConfigError("CompactWindow: window violates its exclude_zero_margin");
}

namespace {

struct Envelope {
  bool available = false;
  // per-index bound sup_{scanned j, alpha} |phi_{X_k}(j alpha)|
  std::function<double(std::uint64_t)> bound;
  std::string note;
};

// Modulus envelope for the scanned (j, alpha) set, monotone enough in k to
// justify tail control by absolute summability.
Envelope make_envelope(const ProcessFamily& p, const CompactWindow& window) {
  Envelope env;
  const double d0 = window.distance_from_zero();
  switch (p.family()) {
    case ProcessFamily::FamilyKind::scale_shift:
      if (p.base() && std::holds_alternative<StandardGaussian>(*p.base())) {
        env.available = true;
        ProcessFamily copy = p;
        env.bound = [copy, d0](std::uint64_t k) {
          const auto l = std::get<ScaleShift>(copy.law_at(k));
          return std::exp(-2.0 * M_PI * M_PI * d0 * d0 * l.sigma * l.sigma);
        };
        env.note = fmt::format(
            "gaussian envelope exp(-2 pi^2 d0^2 sigma_k^2) with d0 = {}", d0);
      }
      break;
    case ProcessFamily::FamilyKind::uniform_interval: {
      env.available = true;
      ProcessFamily copy = p;
      env.bound = [copy, d0](std::uint64_t k) {
        const auto l = std::get<UniformInterval>(copy.law_at(k));
        const double denom = M_PI * d0 * l.sigma;
        return denom > 0 ? std::min(1.0, 1.0 / denom) : 1.0;
      };
      env.note = fmt::format("uniform-interval envelope min(1, 1/(pi d0 sigma_k)), d0 = {}", d0);
      break;
    }
    case ProcessFamily::FamilyKind::uniform_integers: {
      // Dirichlet modulus <= 1/((2k+1)|sin(pi j alpha)|), valid over the
      // scanned j range only; no decay in j is claimed beyond it.
      double min_sin = std::numeric_limits<double>::infinity();
      for (double alpha : window.grid())
        for (std::uint32_t j = 1; j <= window.j_max; ++j)
          min_sin = std::min(min_sin,
                             std::fabs(std::sin(M_PI * static_cast<double>(j) * alpha)));
      if (min_sin > 1e-9) {
        env.available = true;
        ProcessFamily copy = p;
        env.bound = [copy, min_sin](std::uint64_t k) {
          const auto l = std::get<UniformIntegers>(copy.law_at(k));
          const double n = static_cast<double>(l.hi - l.lo + 1);
          return std::min(1.0, 1.0 / (n * min_sin));
        };
        env.note = fmt::format(
            "Dirichlet envelope min(1, 1/(n_k min|sin(pi j alpha)|)) over the scanned "
            "j range, min|sin| = {}", min_sin);
      }
      break;
    }
    default:
      break;
  }
  if (!env.available && env.note.empty())
    env.note = "no summable modulus envelope for this family; tail beyond the "
               "scan is not controlled";
  return env;
}

// Generic Lipschitz constant in alpha: 2 pi j_max sum |a_k| E|X_k|.
// Gaussian scale-shift families get the local bound instead (the generic one
// ignores the CF decay and over-triggers by many orders of magnitude).
std::optional<double> alpha_lipschitz(const ProcessFamily& p, const CompactWindow& window,
                                      const CoefficientSequence* a,
                                      std::uint64_t k_lo, std::uint64_t k_hi) {
  const double jmax = static_cast<double>(window.j_max);
  const double d0 = window.distance_from_zero();
  const double t_min = d0 * 1.0;  // |j| >= 1
  KahanReal acc;
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    const double w = a ? std::abs(a->at(k)) : 1.0;
    if (w == 0.0) continue;
    const Law law = p.law_at(k);
    double deriv;
    if (const auto* ss = std::get_if<ScaleShift>(&law);
        ss && std::holds_alternative<StandardGaussian>(ss->base)) {
      const double s2 = ss->sigma * ss->sigma;
      const double t_max = std::max(std::fabs(window.lo), std::fabs(window.hi)) * jmax;
      deriv = (4.0 * M_PI * M_PI * t_max * s2 + 2.0 * M_PI * std::fabs(ss->mu)) *
              std::exp(-2.0 * M_PI * M_PI * t_min * t_min * s2);
    } else {
      auto m = abs_mean(law);
      if (!m) return std::nullopt;
      deriv = 2.0 * M_PI * *m;
    }
    acc += w * jmax * deriv;
  }
  return acc.value();
}

std::vector<std::int64_t> signed_j_range(std::uint32_t j_max) {
  std::vector<std::int64_t> js;
  for (std::uint32_t j = 1; j <= j_max; ++j) {
    js.push_back(static_cast<std::int64_t>(j));
    js.push_back(-static_cast<std::int64_t>(j));
  }
  return js;
}

HypothesisVerdict verdict_from_profile(
    const std::vector<std::pair<std::uint64_t, double>>& profile, double epsilon,
    bool certified_if_below_epsilon) {
  if (profile.empty()) return HypothesisVerdict::inconclusive;
  if (certified_if_below_epsilon && profile.back().second < epsilon)
    return HypothesisVerdict::certified_bounded;
  const double slope = loglog_trend_slope(profile);
  if (slope < -0.1) return HypothesisVerdict::certified_bounded;
  if (slope > 0.1) return HypothesisVerdict::refuted_growing;
  return HypothesisVerdict::inconclusive;
}

}  // namespace

HypothesisReport check_H(const CoefficientSequence& a, const ProcessFamily& p,
                         const HypothesisScanConfig& cfg) {
  cfg.window.validate(/*must_exclude_zero=*/true);
  if (cfg.N_range.empty()) throw ConfigError("check_H: empty N_range");
  std::vector<std::uint64_t> Ns = cfg.N_range;
  std::sort(Ns.begin(), Ns.end());
  const std::uint64_t m_cap = cfg.m_cap;
  if (Ns.front() < 1 || Ns.back() + 1 >= m_cap)
    throw ConfigError("check_H: need 1 <= N and N + 1 < m_cap");

  const auto js = signed_j_range(cfg.window.j_max);
  const auto alphas = cfg.window.grid();

  // Per (j, alpha): prefix sums P_t = sum_{k<=t} a_k phi_k(j alpha); the
  // window sum for (n, m) is P_m - P_{n-1}. For each N we need the max of
  // |P_t2 - P_t1| over N - 1 <= t1, t1 + 2 <= t2 <= m_cap, grown
  // incrementally as N decreases.
  struct TaskResult {
    std::vector<double> sup_per_N;
    std::vector<SupWitness> witness_per_N;
  };
  std::vector<TaskResult> results(js.size() * alphas.size());

  parallel_for(results.size(), [&](std::size_t idx) {
    const std::int64_t j = js[idx / alphas.size()];
    const double alpha = alphas[idx % alphas.size()];
    const double t = static_cast<double>(j) * alpha;

    std::vector<std::complex<double>> prefix(m_cap + 1);
    KahanComplex acc;
    for (std::uint64_t k = 0; k <= m_cap; ++k) {
      acc += a.at(k) * char_fn(p.law_at(k), t);
      prefix[k] = acc.value();
    }

    TaskResult res;
    res.sup_per_N.assign(Ns.size(), 0.0);
    res.witness_per_N.assign(Ns.size(), SupWitness{});
    double best = 0.0;
    SupWitness best_w;
    std::vector<std::uint64_t> points;  // indices t currently in the window
    std::int64_t next_t = static_cast<std::int64_t>(m_cap);  // descending cursor
    for (std::size_t ni = Ns.size(); ni-- > 0;) {
      const auto start = static_cast<std::int64_t>(Ns[ni] - 1);
      while (next_t >= start) {  // add indices down to `start`
        const auto t1 = static_cast<std::uint64_t>(next_t--);
        for (std::uint64_t t2 : points) {
          const std::uint64_t lo = std::min(t1, t2), hi = std::max(t1, t2);
          if (hi < lo + 2) continue;  // m > n means at least two terms
          const double v = std::abs(prefix[hi] - prefix[lo]);
          if (v > best) {
            best = v;
            best_w = SupWitness{static_cast<std::int64_t>(lo + 1),
                                static_cast<std::int64_t>(hi), j, alpha};
          }
        }
        points.push_back(t1);
      }
      res.sup_per_N[ni] = best;
      res.witness_per_N[ni] = best_w;
    }
    results[idx] = std::move(res);
  });

  HypothesisReport report;
  report.tail_profile.reserve(Ns.size());
  std::vector<SupWitness> witness_per_N(Ns.size());
  for (std::size_t ni = 0; ni < Ns.size(); ++ni) {
    double sup = 0.0;
    SupWitness w;
    for (const auto& res : results) {
      if (res.sup_per_N[ni] > sup) {
        sup = res.sup_per_N[ni];
        w = res.witness_per_N[ni];
      }
    }
    report.tail_profile.push_back({Ns[ni], sup});
    witness_per_N[ni] = w;
  }
  report.sup_value = report.tail_profile.front().second;
  report.attained_at = witness_per_N.front();

  // Grid guard over the widest window.
  const Envelope env = make_envelope(p, cfg.window);
  auto lipschitz = alpha_lipschitz(p, cfg.window, &a, Ns.front(), m_cap);
  const double h = cfg.window.spacing();
  std::string guard_note;
  if (lipschitz) {
    const double osc = *lipschitz * h / 2.0;
    guard_note = fmt::format("alpha-oscillation guard {}", osc);
    if (!env.available && osc > std::max(report.sup_value, cfg.epsilon))
      throw GridTooCoarse(fmt::format(
          "check_H: inter-grid oscillation bound {} exceeds the scanned sup {}; "
          "refine grid_points", osc, report.sup_value));
  } else if (!env.available) {
    throw GridTooCoarse("check_H: no Lipschitz bound available for this family "
                        "(infinite E|X_k|) and no modulus envelope");
  }

  report.verdict = verdict_from_profile(report.tail_profile, cfg.epsilon, true);

  // Envelope route: absolute summability certifies the tail regardless of the
  // trend heuristic.
  if (report.verdict != HypothesisVerdict::certified_bounded && env.available) {
    KahanReal env_tail;
    for (std::uint64_t k = Ns.back(); k <= m_cap; ++k)
      env_tail += std::abs(a.at(k)) * env.bound(k);
    if (env_tail.value() < cfg.epsilon)
      report.verdict = HypothesisVerdict::certified_bounded;
  }
  report.truncation_note =
      fmt::format("j scanned over 1 <= |j| <= {}; {}; {}", cfg.window.j_max, env.note,
                  guard_note.empty() ? "no alpha guard" : guard_note);
  return report;
}

HypothesisReport check_Hprime(const ProcessFamily& p, const CompactWindow& window,
                              std::uint64_t N_max) {
  window.validate(/*must_exclude_zero=*/true);
  const auto js = signed_j_range(window.j_max);
  const auto alphas = window.grid();

  // Checkpoints for the running-sup profile: powers of two up to N_max.
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t n = 1; n < N_max; n *= 2) checkpoints.push_back(n);
  checkpoints.push_back(N_max);

  struct TaskResult {
    std::vector<double> running;
    SupWitness witness;
    double sup = 0.0;
  };
  std::vector<TaskResult> results(js.size() * alphas.size());
  parallel_for(results.size(), [&](std::size_t idx) {
    const std::int64_t j = js[idx / alphas.size()];
    const double alpha = alphas[idx % alphas.size()];
    const double t = static_cast<double>(j) * alpha;
    TaskResult res;
    res.running.assign(checkpoints.size(), 0.0);
    KahanComplex acc;
    double best = 0.0;
    std::int64_t best_N = 0;
    std::size_t ci = 0;
    for (std::uint64_t k = 0; k <= N_max; ++k) {
      acc += char_fn(p.law_at(k), t);
      const double v = std::abs(acc.value());
      if (v > best) {
        best = v;
        best_N = static_cast<std::int64_t>(k);
      }
      while (ci < checkpoints.size() && k == checkpoints[ci]) res.running[ci++] = best;
    }
    res.sup = best;
    res.witness = SupWitness{0, best_N, j, alpha};
    results[idx] = std::move(res);
  });

  HypothesisReport report;
  for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
    double sup = 0.0;
    for (const auto& res : results) sup = std::max(sup, res.running[ci]);
    report.tail_profile.push_back({checkpoints[ci], sup});
  }
  for (const auto& res : results) {
    if (res.sup > report.sup_value) {
      report.sup_value = res.sup;
      report.attained_at = res.witness;
    }
  }
  // Running sups cannot decrease; boundedness shows up as a flat trend.
  const double slope = loglog_trend_slope(report.tail_profile);
  if (slope > 0.1) report.verdict = HypothesisVerdict::refuted_growing;
  else if (slope < 0.05) report.verdict = HypothesisVerdict::certified_bounded;
  else report.verdict = HypothesisVerdict::inconclusive;
  report.truncation_note = fmt::format(
      "running sup of |sum_(k<=N) phi_k(j alpha)| for N <= {}, 1 <= |j| <= {}; "
      "log-log trend slope {}", N_max, window.j_max, slope);
  return report;
}

HypothesisReport check_Hsecond(const ProcessFamily& p, const HypothesisScanConfig& cfg) {
  cfg.window.validate(/*must_exclude_zero=*/true);
  std::vector<std::uint64_t> Ns = cfg.N_range;
  std::sort(Ns.begin(), Ns.end());
  if (Ns.empty() || Ns.front() < 1 || Ns.back() >= cfg.m_cap)
    throw ConfigError("check_Hsecond: need 1 <= N <= m_cap");
  const auto js = signed_j_range(cfg.window.j_max);
  const auto alphas = cfg.window.grid();

  // Nonnegative terms: the sup over n, m in [N, m_cap] is the full tail sum
  // starting at N.
  struct TaskResult {
    std::vector<double> tail;
  };
  std::vector<TaskResult> results(js.size() * alphas.size());
  parallel_for(results.size(), [&](std::size_t idx) {
    const std::int64_t j = js[idx / alphas.size()];
    const double alpha = alphas[idx % alphas.size()];
    const double t = static_cast<double>(j) * alpha;
    TaskResult res;
    res.tail.assign(Ns.size(), 0.0);
    KahanReal acc;
    std::size_t ni = Ns.size();
    for (std::uint64_t k = cfg.m_cap + 1; k-- > Ns.front();) {
      acc += std::norm(char_fn(p.law_at(k), t));
      while (ni > 0 && Ns[ni - 1] == k) res.tail[--ni] = acc.value();
    }
    results[idx] = std::move(res);
  });

  HypothesisReport report;
  std::vector<SupWitness> w(Ns.size());
  for (std::size_t ni = 0; ni < Ns.size(); ++ni) {
    double sup = 0.0;
    for (std::size_t idx = 0; idx < results.size(); ++idx) {
      if (results[idx].tail[ni] > sup) {
        sup = results[idx].tail[ni];
        w[ni] = SupWitness{static_cast<std::int64_t>(Ns[ni]),
                           static_cast<std::int64_t>(cfg.m_cap),
                           js[idx / alphas.size()],
                           alphas[idx % alphas.size()]};
      }
    }
    report.tail_profile.push_back({Ns[ni], sup});
  }
  report.sup_value = report.tail_profile.front().second;
  report.attained_at = w.front();
  report.verdict = verdict_from_profile(report.tail_profile, cfg.epsilon, true);

  const Envelope env = make_envelope(p, cfg.window);
  if (report.verdict != HypothesisVerdict::certified_bounded && env.available) {
    KahanReal env_tail;
    for (std::uint64_t k = Ns.back(); k <= cfg.m_cap; ++k) {
      const double e = env.bound(k);
      env_tail += e * e;
    }
    if (env_tail.value() < cfg.epsilon)
      report.verdict = HypothesisVerdict::certified_bounded;
  }
  report.truncation_note =
      fmt::format("squared-modulus tails for 1 <= |j| <= {}; {}", cfg.window.j_max,
                  env.note);
  return report;
}

double abel_split_bound(const CoefficientSequence& a, const ProcessFamily& p,
                        const CompactWindow& window, std::uint64_t n, std::uint64_t m) {
  window.validate(/*must_exclude_zero=*/true);
  if (!(n < m)) throw ConfigError("abel_split_bound: n < m required");
  const auto js = signed_j_range(window.j_max);
  const auto alphas = window.grid();

  double sup_phi = 0.0;
  std::mutex mu;
  parallel_for(js.size() * alphas.size(), [&](std::size_t idx) {
    const std::int64_t j = js[idx / alphas.size()];
    const double alpha = alphas[idx % alphas.size()];
    const double t = static_cast<double>(j) * alpha;
    // phi_p = sum_{k=0}^{p-1} phi_{X_k}; running sup over p <= m + 1.
    KahanComplex acc;
    double best = 0.0;
    for (std::uint64_t k = 0; k <= m; ++k) {
      acc += char_fn(p.law_at(k), t);
      best = std::max(best, std::abs(acc.value()));
    }
    // The Abel identity itself, checked exactly on this range.
    std::vector<std::complex<double>> phi_partial(m + 2);
    KahanComplex pacc;
    phi_partial[0] = 0.0;
    for (std::uint64_t k = 0; k <= m; ++k) {
      pacc += char_fn(p.law_at(k), t);
      phi_partial[k + 1] = pacc.value();
    }
    KahanComplex lhs;
    for (std::uint64_t k = n; k <= m; ++k)
      lhs += a.at(k) * (phi_partial[k + 1] - phi_partial[k]);
    KahanComplex rhs;
    rhs += -a.at(n) * phi_partial[n];
    rhs += a.at(m) * phi_partial[m + 1];
    for (std::uint64_t k = n + 1; k <= m; ++k)
      rhs += (a.at(k - 1) - a.at(k)) * phi_partial[k];
    const double scale = std::max(1.0, std::abs(lhs.value()));
    if (std::abs(lhs.value() - rhs.value()) > 1e-10 * scale)
      throw std::logic_error("abel_split_bound: Abel identity violated");
    std::lock_guard<std::mutex> lock(mu);
    sup_phi = std::max(sup_phi, best);
  });

  KahanReal variation;
  for (std::uint64_t k = n + 1; k <= m; ++k) variation += std::abs(a.at(k) - a.at(k - 1));
  return (std::abs(a.at(m)) + std::abs(a.at(n)) + variation.value()) * sup_phi;
}

ConvolutionBound convolution_geometric_bound(const BaseLaw& base,
                                             const CompactWindow& window, double delta,
                                             double q, std::uint64_t N_max) {
  window.validate(/*must_exclude_zero=*/true);
  if (!(delta > 0)) throw ConfigError("convolution_geometric_bound: delta > 0 required");
  if (N_max < 1) throw ConfigError("convolution_geometric_bound: N_max >= 1 required");
  const double eps = window.distance_from_zero() / 2.0;  // 2 eps = d(0, K)
  const double j_cut = std::floor(2.0 * q / std::pow(eps, delta));

  ConvolutionBound out;
  double low_c = std::numeric_limits<double>::infinity();  // inf |u|^d |1 - phi(u)|
  double low_u_max = 0.0;
  double high_r_max = 0.0;

  for (std::uint32_t ja = 1; ja <= window.j_max; ++ja) {
    for (int sign = -1; sign <= 1; sign += 2) {
      const auto j = static_cast<std::int64_t>(ja) * sign;
      const bool low = std::pow(static_cast<double>(ja), delta) <= j_cut;
      for (double t : window.grid()) {
        const double u = static_cast<double>(j) * t;
        const std::complex<double> z = char_fn(base, u);
        const double r = std::abs(z);
        if (r >= 1.0 - 1e-12)
          throw AperiodicityViolated(
              fmt::format("|phi({})| = {} at a nonzero argument", u, r));
        out.q_scanned = std::max(out.q_scanned, std::pow(std::fabs(u), delta) * r);
        // running geometric partial sums sum_{k=1}^N z^k
        std::complex<double> zp = z;
        KahanComplex acc;
        double best = 0.0;
        std::uint64_t best_N = 1;
        for (std::uint64_t N = 1; N <= N_max; ++N) {
          acc += zp;
          const double v = std::abs(acc.value());
          if (v > best) {
            best = v;
            best_N = N;
          }
          zp *= z;
          if (std::abs(zp) < 1e-18) break;
        }
        if (best > out.scanned_sup) {
          out.scanned_sup = best;
          out.attained_at = SupWitness{static_cast<std::int64_t>(best_N), 0, j, t};
        }
        if (low) {
          low_c = std::min(low_c, std::pow(std::fabs(u), delta) * std::abs(1.0 - z));
          low_u_max = std::max(low_u_max, std::pow(std::fabs(u), delta));
        } else {
          high_r_max = std::max(high_r_max, q / std::pow(std::fabs(u), delta));
        }
      }
    }
  }

  if (out.q_scanned > q * (1.0 + 1e-9))
    throw NumericRefusal(fmt::format(
        "convolution_geometric_bound: scanned sup |t|^delta |phi(t)| = {} exceeds the "
        "declared q = {}", out.q_scanned, q));

  out.low_j_bound = low_u_max > 0.0 ? 2.0 * low_u_max / low_c : 0.0;
  out.high_j_bound =
      high_r_max > 0.0
          ? (high_r_max < 1.0 ? high_r_max / (1.0 - high_r_max)
                              : std::numeric_limits<double>::infinity())
          : 0.0;
  if (out.scanned_sup > std::max(out.low_j_bound, out.high_j_bound) * (1.0 + 1e-9))
    throw std::logic_error(
        "convolution_geometric_bound: scanned sup exceeds the analytic bound");
  return out;
}

std::string HypothesisReport::to_json(const std::string& hypothesis_name) const {
  nlohmann::json profile = nlohmann::json::array();
  for (const auto& [N, sup] : tail_profile) profile.push_back({N, sup});
  const char* verdict_name = verdict == HypothesisVerdict::certified_bounded
                                 ? "certified_bounded"
                                 : verdict == HypothesisVerdict::refuted_growing
                                       ? "refuted_growing"
                                       : "inconclusive";
  nlohmann::json doc{{"hypothesis", hypothesis_name},
                     {"sup", sup_value},
                     {"witness",
                      {{"n", attained_at.n},
                       {"m", attained_at.m},
                       {"j", attained_at.j},
                       {"alpha", attained_at.alpha}}},
                     {"profile", profile},
                     {"verdict", verdict_name},
                     {"truncation_note", truncation_note}};
  return doc.dump(2);
}

}  // namespace rfs
