#include "rfs/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "rfs/errors.hpp"
#include "rfs/kahan.hpp"
#include "rfs/util.hpp"

namespace rfs {

namespace {

constexpr std::uint64_t kDirectLimit = 1u << 16;  // terms summed before bracketing

// Integral bracket for sum_{k>=n} k^(-2 delta), n >= 1, 2 delta > 1:
//   int_n^inf x^(-2d) dx <= sum <= int_{n-1}^inf x^(-2d) dx.
TailEnergy power_tail_sq(double n, double two_delta, double scale_sq) {
  TailEnergy out;
  if (two_delta <= 1.0) {
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const double p = two_delta - 1.0;
  const double lower = std::pow(n, -p) / p;
  const double upper = n > 1.0 ? std::pow(n - 1.0, -p) / p
                               : lower + 1.0;  // k=...: crude cap, never used after
                                               // direct summation of the head
  out.value = scale_sq * 0.5 * (lower + upper);
  out.half_width = scale_sq * 0.5 * (upper - lower);
  return out;
}

// sum_{k=n}^{n+count-1} scale^2 k^(-2 delta), exact direct summation.
double direct_power_sum_sq(std::uint64_t n, std::uint64_t count, double two_delta,
                           double scale_sq) {
  KahanReal acc;
  for (std::uint64_t k = n; k < n + count; ++k)
    acc += scale_sq * std::pow(static_cast<double>(k), -two_delta);
  return acc.value();
}

}  // namespace

GrowthRegime GrowthRegime::polynomial(double d) {
  if (!(d > 0)) throw ConfigError("GrowthRegime: d must be > 0");
  GrowthRegime r;
  r.kind = Kind::polynomial;
  r.d = d;
  return r;
}

GrowthRegime GrowthRegime::subexponential(double gamma) {
  if (!(gamma > 0 && gamma < 1))
    throw ConfigError("GrowthRegime: gamma must be in (0,1)");
  GrowthRegime r;
  r.kind = Kind::subexponential;
  r.gamma = gamma;
  return r;
}

CoefficientSequence CoefficientSequence::power_law(double delta, double scale,
                                                   std::string description) {
  // delta = 0 is admitted so the constant sequence is representable; the
  // summability checks classify anything with delta <= 1/2 as divergent.
  if (!(delta >= 0) || !std::isfinite(scale))
    throw ConfigError("CoefficientSequence: need delta >= 0 and finite scale");
  CoefficientSequence a;
  a.kind_ = Kind::power_law;
  a.delta_ = delta;
  a.scale_ = scale;
  a.description_ = std::move(description);
  return a;
}

CoefficientSequence CoefficientSequence::explicit_list(
    std::vector<std::complex<double>> values, TailRule tail, double tail_delta,
    double tail_scale, std::string description) {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ConfigError("CoefficientSequence: non-finite entry");
  CoefficientSequence a;
  a.kind_ = Kind::explicit_list;
  a.values_ = std::move(values);
  a.tail_rule_ = tail;
  a.tail_delta_ = tail_delta;
  a.tail_scale_ = tail_scale;
  a.description_ = std::move(description);
  return a;
}

std::complex<double> CoefficientSequence::at(std::uint64_t k) const {
  if (kind_ == Kind::power_law) {
    if (k == 0) return 0.0;  // the family is indexed from k = 1
    return scale_ * std::pow(static_cast<double>(k), -delta_);
  }
  if (k == 0) return 0.0;  // explicit lists are indexed from k = 1 too
  if (k <= values_.size()) return values_[k - 1];
  if (tail_rule_ == TailRule::zero) return 0.0;
  return tail_scale_ * std::pow(static_cast<double>(k), -tail_delta_);
}

TailEnergy CoefficientSequence::tail_energy_squared(std::uint64_t n) const {
  if (n < 1) throw ConfigError("tail_energy: n >= 1 required");
  TailEnergy out;
  if (kind_ == Kind::power_law) {
    if (scale_ == 0.0) return out;
    if (2.0 * delta_ <= 1.0) {
      out.divergent = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    const double head =
        direct_power_sum_sq(n, kDirectLimit, 2.0 * delta_, scale_ * scale_);
    TailEnergy rest = power_tail_sq(static_cast<double>(n + kDirectLimit), 2.0 * delta_,
                                    scale_ * scale_);
    out.value = head + rest.value;
    out.half_width = rest.half_width;
    return out;
  }
  KahanReal acc;
  for (std::uint64_t k = std::max<std::uint64_t>(n, 1); k <= values_.size(); ++k)
    acc += std::norm(values_[k - 1]);
  out.value = acc.value();
  if (tail_rule_ == TailRule::power_law && tail_scale_ != 0.0) {
    const std::uint64_t start = std::max<std::uint64_t>(n, values_.size() + 1);
    if (2.0 * tail_delta_ <= 1.0) {
      out.divergent = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    const double head = direct_power_sum_sq(start, kDirectLimit, 2.0 * tail_delta_,
                                            tail_scale_ * tail_scale_);
    TailEnergy rest = power_tail_sq(static_cast<double>(start + kDirectLimit),
                                    2.0 * tail_delta_, tail_scale_ * tail_scale_);
    out.value += head + rest.value;
    out.half_width += rest.half_width;
  }
  return out;
}

TailEnergy CoefficientSequence::tail_energy(std::uint64_t n) const {
  TailEnergy sq = tail_energy_squared(n);
  if (sq.divergent) return sq;
  TailEnergy out;
  const double lo = std::sqrt(std::max(0.0, sq.value - sq.half_width));
  const double hi = std::sqrt(sq.value + sq.half_width);
  out.value = 0.5 * (lo + hi);
  out.half_width = 0.5 * (hi - lo);
  return out;
}

ConditionReport CoefficientSequence::check_condition(const GrowthRegime& regime,
                                                     std::uint64_t horizon) const {
  ConditionReport report;
  if (kind_ == Kind::power_law) {
    // Exact classification; boundary equalities fail (the condition series
    // has terms ~ 1/n there).
    if (scale_ == 0.0) {
      report.verdict = Verdict::holds;
      return report;
    }
    const double threshold = regime.kind == GrowthRegime::Kind::polynomial
                                 ? 0.5
                                 : (regime.gamma + 1.0) / 2.0;
    report.verdict = delta_ > threshold ? Verdict::holds : Verdict::fails;
    return report;
  }
  // A finite prefix cannot certify an infinite series: report diagnostics.
  report.verdict = Verdict::inconclusive;
  KahanReal acc;
  std::vector<std::pair<std::uint64_t, double>> terms;
  for (std::uint64_t n = 2; n <= horizon; ++n) {
    TailEnergy tail = tail_energy(n);
    if (tail.divergent) {
      report.verdict = Verdict::fails;
      report.partial_sum = std::numeric_limits<double>::infinity();
      return report;
    }
    const double denom = regime.kind == GrowthRegime::Kind::polynomial
                             ? static_cast<double>(n) *
                                   std::sqrt(std::log(static_cast<double>(n)))
                             : std::pow(static_cast<double>(n), 1.0 - regime.gamma / 2.0);
    const double term = tail.value / denom;
    acc += term;
    if ((n & (n - 1)) == 0) terms.push_back({n, term});
  }
  report.partial_sum = acc.value();
  report.trend_slope = loglog_trend_slope(terms);
  return report;
}

VariationReport CoefficientSequence::total_variation(std::uint64_t horizon) const {
  if (horizon < 1) throw ConfigError("total_variation: horizon >= 1 required");
  VariationReport report;
  if (kind_ == Kind::power_law) {
    // Monotone, so the variation telescopes: sum = |a_1| - |a_{H+1}|,
    // bounded by |a_1| for every horizon.
    report.partial_sum =
        std::abs(scale_) * (1.0 - std::pow(static_cast<double>(horizon) + 1.0, -delta_));
    report.verdict = Verdict::holds;
    return report;
  }
  KahanReal acc;
  for (std::uint64_t k = 1; k <= horizon; ++k) acc += std::abs(at(k) - at(k + 1));
  report.partial_sum = acc.value();
  report.verdict = Verdict::inconclusive;
  return report;
}

double weight_c(std::uint64_t n, const GrowthRegime& regime) {
  if (n < 2) throw ConfigError("weight_c: n >= 2 required");
  if (regime.kind == GrowthRegime::Kind::polynomial)
    return 1.0 + std::sqrt(std::log(static_cast<double>(n)));
  return std::pow(static_cast<double>(n), regime.gamma / 2.0);
}

namespace {

// sum_{l in (lo, hi]} |a_l|^2 with real-valued block boundaries (the
// polynomial blocks 2^(2^k) outgrow 64-bit integers).
double block_sum_sq(const CoefficientSequence& a, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (a.kind() == CoefficientSequence::Kind::power_law) {
    const double s2 = a.scale() * a.scale();
    const double two_delta = 2.0 * a.delta();
    const auto first = static_cast<std::uint64_t>(lo) + 1;
    if (hi <= static_cast<double>(kDirectLimit)) {
      KahanReal acc;
      for (std::uint64_t l = first; l <= static_cast<std::uint64_t>(hi); ++l)
        acc += s2 * std::pow(static_cast<double>(l), -two_delta);
      return acc.value();
    }
    // Direct head, then the finite-range integral bracket midpoint
    //   int_{m+1}^{H+1} <= sum_{l=m+1}^{H} <= int_m^H   (decreasing terms).
    const std::uint64_t head_end = first + kDirectLimit;
    KahanReal acc;
    for (std::uint64_t l = first; l < head_end; ++l)
      acc += s2 * std::pow(static_cast<double>(l), -two_delta);
    const double m = static_cast<double>(head_end - 1);
    auto primitive = [&](double x) {
      return two_delta == 1.0 ? std::log(x)
                              : std::pow(x, 1.0 - two_delta) / (1.0 - two_delta);
    };
    const double lower = primitive(hi + 1.0) - primitive(m + 1.0);
    const double upper = primitive(hi) - primitive(m);
    return acc.value() + s2 * 0.5 * (lower + upper);
  }
  TailEnergy from = a.tail_energy_squared(static_cast<std::uint64_t>(lo) + 1);
  TailEnergy beyond =
      hi >= 1.8e19 ? TailEnergy{} : a.tail_energy_squared(static_cast<std::uint64_t>(hi) + 1);
  if (from.divergent) return std::numeric_limits<double>::infinity();
  return std::max(0.0, from.value - beyond.value);
}

}  // namespace

std::vector<double> check_block_criterion(const CoefficientSequence& a,
                                          const GrowthRegime& regime,
                                          const std::function<double(double)>& phi,
                                          int K_max) {
  if (K_max < 1) throw ConfigError("check_block_criterion: K_max >= 1 required");
  const bool poly = regime.kind == GrowthRegime::Kind::polynomial;
  if (poly && K_max > 5)
    throw OverflowError("check_block_criterion: polynomial blocks exceed the "
                        "representable range beyond K_max = 5");
  if (!poly && K_max > 61)
    throw OverflowError("check_block_criterion: subexponential blocks exceed the "
                        "representable range beyond K_max = 61");
  auto block_edge = [&](int k) {
    return poly ? std::exp2(std::exp2(static_cast<double>(k)))
                : std::exp2(static_cast<double>(k));
  };
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(K_max));
  for (int k = 1; k <= K_max; ++k) {
    const double sum_sq = block_sum_sq(a, block_edge(k), block_edge(k + 1));
    terms.push_back(std::sqrt(std::log(phi(block_edge(k + 1))) * sum_sq));
  }
  return terms;
}

std::string CoefficientSequence::to_json() const {
  nlohmann::json doc;
  if (kind_ == Kind::power_law) {
    doc = {{"kind", "power_law"}, {"delta", delta_}, {"scale", scale_}};
  } else {
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& v : values_) vals.push_back({v.real(), v.imag()});
    nlohmann::json tail;
    if (tail_rule_ == TailRule::zero)
      tail = {{"kind", "zero"}};
    else
      tail = {{"kind", "power_law"}, {"delta", tail_delta_}, {"scale", tail_scale_}};
    doc = {{"kind", "explicit"}, {"values", vals}, {"tail", tail}};
  }
  if (!description_.empty()) doc["description"] = description_;
  return doc.dump();
}

CoefficientSequence CoefficientSequence::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("CoefficientSequence: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind"))
    throw ConfigError("CoefficientSequence: expected object with \"kind\"");
  const std::string kind = doc["kind"].get<std::string>();
  std::string description = doc.value("description", std::string{});
  if (kind == "power_law") {
    for (auto& [key, v] : doc.items())
      if (key != "kind" && key != "delta" && key != "scale" && key != "description")
        throw ConfigError("CoefficientSequence: unknown field \"" + key + "\"");
    if (!doc.contains("delta")) throw ConfigError("CoefficientSequence: missing delta");
    return power_law(doc["delta"].get<double>(), doc.value("scale", 1.0), description);
  }
  if (kind == "explicit") {
    for (auto& [key, v] : doc.items())
      if (key != "kind" && key != "values" && key != "tail" && key != "description")
        throw ConfigError("CoefficientSequence: unknown field \"" + key + "\"");
    std::vector<std::complex<double>> values;
    for (const auto& entry : doc.value("values", nlohmann::json::array())) {
      if (!entry.is_array() || entry.size() != 2)
        throw ConfigError("CoefficientSequence: values entries must be [re, im]");
      values.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    TailRule rule = TailRule::zero;
    double tdelta = 0.0, tscale = 0.0;
    if (doc.contains("tail")) {
      const auto& tail = doc["tail"];
      const std::string tkind = tail.value("kind", "zero");
      if (tkind == "power_law") {
        rule = TailRule::power_law;
        tdelta = tail.value("delta", 1.0);
        tscale = tail.value("scale", 1.0);
      } else if (tkind != "zero") {
        throw ConfigError("CoefficientSequence: unknown tail kind \"" + tkind + "\"");
      }
      for (auto& [key, v] : tail.items())
        if (key != "kind" && key != "delta" && key != "scale")
          throw ConfigError("CoefficientSequence: unknown tail field \"" + key + "\"");
    }
    return explicit_list(std::move(values), rule, tdelta, tscale, description);
  }
  throw ConfigError("CoefficientSequence: unknown kind \"" + kind + "\"");
}

}  // namespace rfs
