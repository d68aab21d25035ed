#include "rfs/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "rfs/counterexample.hpp"
#include "rfs/engine.hpp"
#include "rfs/errors.hpp"
#include "rfs/hypotheses.hpp"
#include "rfs/util.hpp"

namespace rfs {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read file: {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write file: {}", path.string()));
  out << content;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", what, e.what()));
  }
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
  if (!obj.is_object()) throw ConfigError(fmt::format("{}: expected an object", context));
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(fmt::format("{}: unknown field \"{}\"", context, key));
  }
}

double get_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number())
    throw ConfigError(fmt::format("field \"{}\" must be a number", key));
  return obj.at(key).get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_unsigned())
    throw ConfigError(fmt::format("field \"{}\" must be a nonnegative integer", key));
  return obj.at(key).get<std::uint64_t>();
}

CompactWindow parse_window(const json& obj) {
  check_keys(obj, {"lo", "hi", "grid_points", "j_max", "exclude_zero_margin"}, "window");
  if (!obj.contains("lo") || !obj.contains("hi"))
    throw ConfigError("window: fields \"lo\" and \"hi\" are required");
  CompactWindow w;
  w.lo = get_number(obj, "lo", 1.0);
  w.hi = get_number(obj, "hi", 2.0);
  w.grid_points = static_cast<std::uint32_t>(get_uint(obj, "grid_points", 256));
  w.j_max = static_cast<std::uint32_t>(get_uint(obj, "j_max", 8));
  w.exclude_zero_margin = get_number(obj, "exclude_zero_margin", 0.0);
  return w;
}

json window_to_json(const CompactWindow& w) {
  return json{{"lo", w.lo},
              {"hi", w.hi},
              {"grid_points", w.grid_points},
              {"j_max", w.j_max},
              {"exclude_zero_margin", w.exclude_zero_margin}};
}

GrowthRegime parse_growth(const json& obj) {
  check_keys(obj, {"regime", "d", "gamma"}, "growth");
  if (!obj.contains("regime") || !obj.at("regime").is_string())
    throw ConfigError("growth: string field \"regime\" is required");
  const std::string regime = obj.at("regime").get<std::string>();
  if (regime == "polynomial") return GrowthRegime::polynomial(get_number(obj, "d", 1.0));
  if (regime == "subexponential")
    return GrowthRegime::subexponential(get_number(obj, "gamma", 0.5));
  throw ConfigError(fmt::format("growth: unknown regime \"{}\"", regime));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "inconclusive";
  }
}

json required_object(const json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg.at(key).is_object())
    throw ConfigError(fmt::format("config: object field \"{}\" is required", key));
  return cfg.at(key);
}

// CSV artifacts embed the manifest as a leading comment line so that every
// output file carries its full provenance.
std::string csv_with_manifest(const json& manifest, const std::string& header,
                              const std::string& rows) {
  return fmt::format("# manifest {}\n{}\n{}", manifest.dump(), header, rows);
}

json base_manifest(const RunManifest& m, const json& resolved_config) {
  json doc{{"command", m.command}, {"seed", m.seed}, {"config", resolved_config}};
  if (m.command == "check-hypothesis") doc["which"] = m.which;
  return doc;
}

int run_simulate(const RunManifest& m, const json& cfg,
                 const std::filesystem::path& out) {
  check_keys(cfg, {"process", "coefficients", "function", "window", "checkpoints",
                   "centered"},
             "simulate config");
  ProcessFamily p = ProcessFamily::from_json(required_object(cfg, "process").dump());
  CoefficientSequence a =
      CoefficientSequence::from_json(required_object(cfg, "coefficients").dump());
  FourierFunction f = FourierFunction::from_json(required_object(cfg, "function").dump());
  CompactWindow window = parse_window(required_object(cfg, "window"));
  std::vector<std::uint64_t> checkpoints = default_checkpoints();
  if (cfg.contains("checkpoints")) {
    if (!cfg.at("checkpoints").is_array())
      throw ConfigError("simulate config: \"checkpoints\" must be an array");
    checkpoints = cfg.at("checkpoints").get<std::vector<std::uint64_t>>();
  }
  const bool centered = cfg.value("centered", true);

  json resolved{{"process", json::parse(p.to_json())},
                {"coefficients", json::parse(a.to_json())},
                {"function", json::parse(f.to_json())},
                {"window", window_to_json(window)},
                {"checkpoints", checkpoints},
                {"centered", centered}};
  const json manifest = base_manifest(m, resolved);

  SeriesRealization r(m.seed, p, a, f);
  const ConvergenceDiagnostics diag = cauchy_diagnostic(r, window, checkpoints, centered);

  std::string rows;
  for (const auto& e : diag.cauchy_profile)
    rows += fmt::format("{},{},{},{}\n", e.n, e.m, e.sup, e.guard);
  write_file(out / "cauchy_profile.csv",
             csv_with_manifest(manifest, "n,m,sup,guard", rows));
  const char* vname = diag.verdict == HypothesisVerdict::certified_bounded
                          ? "certified_bounded"
                          : diag.verdict == HypothesisVerdict::refuted_growing
                                ? "refuted_growing"
                                : "inconclusive";
  write_file(out / "report.json", json{{"manifest", manifest},
                                       {"verdict", vname},
                                       {"trend_slope", diag.trend_slope}}
                                      .dump(2) +
                                      "\n");
  return 0;
}

int run_check_conditions(const RunManifest& m, const json& cfg,
                         const std::filesystem::path& out) {
  check_keys(cfg, {"coefficients", "growth", "horizon"}, "check-conditions config");
  CoefficientSequence a =
      CoefficientSequence::from_json(required_object(cfg, "coefficients").dump());
  const GrowthRegime growth = parse_growth(required_object(cfg, "growth"));
  const std::uint64_t horizon = get_uint(cfg, "horizon", 100000);

  json resolved{{"coefficients", json::parse(a.to_json())},
                {"growth", required_object(cfg, "growth")},
                {"horizon", horizon}};
  const json manifest = base_manifest(m, resolved);

  const ConditionReport cond = a.check_condition(growth, horizon);
  const VariationReport var = a.total_variation(horizon);
  write_file(out / "report.json",
             json{{"manifest", manifest},
                  {"condition",
                   {{"verdict", verdict_name(cond.verdict)},
                    {"partial_sum", cond.partial_sum},
                    {"trend_slope", cond.trend_slope}}},
                  {"total_variation",
                   {{"verdict", verdict_name(var.verdict)},
                    {"partial_sum", var.partial_sum}}}}
                 .dump(2) +
                 "\n");
  return 0;
}

int run_check_hypothesis(const RunManifest& m, const json& cfg,
                         const std::filesystem::path& out) {
  check_keys(cfg, {"process", "coefficients", "window", "N_range", "m_cap", "epsilon",
                   "N_max"},
             "check-hypothesis config");
  ProcessFamily p = ProcessFamily::from_json(required_object(cfg, "process").dump());
  CompactWindow window = parse_window(required_object(cfg, "window"));

  HypothesisScanConfig scan;
  scan.window = window;
  if (cfg.contains("N_range"))
    scan.N_range = cfg.at("N_range").get<std::vector<std::uint64_t>>();
  scan.m_cap = get_uint(cfg, "m_cap", scan.m_cap);
  scan.epsilon = get_number(cfg, "epsilon", scan.epsilon);
  const std::uint64_t N_max = get_uint(cfg, "N_max", 4096);

  json resolved{{"process", json::parse(p.to_json())},
                {"window", window_to_json(window)}};
  HypothesisReport report;
  if (m.which == "H") {
    CoefficientSequence a =
        CoefficientSequence::from_json(required_object(cfg, "coefficients").dump());
    resolved["coefficients"] = json::parse(a.to_json());
    resolved["N_range"] = scan.N_range;
    resolved["m_cap"] = scan.m_cap;
    resolved["epsilon"] = scan.epsilon;
    report = check_H(a, p, scan);
  } else if (m.which == "Hprime") {
    resolved["N_max"] = N_max;
    report = check_Hprime(p, window, N_max);
  } else if (m.which == "Hsecond") {
    resolved["N_range"] = scan.N_range;
    resolved["m_cap"] = scan.m_cap;
    resolved["epsilon"] = scan.epsilon;
    report = check_Hsecond(p, scan);
  } else {
    throw ConfigError(fmt::format("--which must be H, Hprime or Hsecond (got \"{}\")",
                                  m.which));
  }
  json doc = json::parse(report.to_json(m.which));
  doc["manifest"] = base_manifest(m, resolved);
  write_file(out / "report.json", doc.dump(2) + "\n");
  return 0;
}

int run_counterexample(const RunManifest& m, const json& cfg,
                       const std::filesystem::path& out) {
  check_keys(cfg, {"delta", "kmax", "quadrature_points"}, "counterexample config");
  CounterexampleConfig config;
  const double delta = get_number(cfg, "delta", 0.5);
  config.a = CoefficientSequence::power_law(delta);
  config.k_max = get_uint(cfg, "kmax", 200);
  config.quadrature_points =
      static_cast<std::uint32_t>(get_uint(cfg, "quadrature_points", 0));

  json resolved{{"delta", delta},
                {"kmax", config.k_max},
                {"quadrature_points", config.quadrature_points}};
  const json manifest = base_manifest(m, resolved);

  std::string rows;
  for (std::uint64_t k = 1; k <= config.k_max; ++k) {
    const auto Q = static_cast<std::uint32_t>(32 * (2 * k + 1));
    rows += fmt::format("{},{}\n", k, dirichlet_integral(k, Q));
  }
  write_file(out / "dirichlet.csv", csv_with_manifest(manifest, "k,I_k", rows));

  const L2Identity id = l2_identity_check(config, m.seed);
  write_file(out / "l2.csv",
             csv_with_manifest(manifest, "k_max,lhs,rhs",
                               fmt::format("{},{},{}\n", config.k_max, id.lhs, id.rhs)));
  return 0;
}

int run_bound_scan(const RunManifest& m, const json& cfg,
                   const std::filesystem::path& out) {
  check_keys(cfg, {"process", "coefficients", "function", "alpha_max", "n", "points"},
             "bound-scan config");
  ProcessFamily p = ProcessFamily::from_json(required_object(cfg, "process").dump());
  CoefficientSequence a =
      CoefficientSequence::from_json(required_object(cfg, "coefficients").dump());
  FourierFunction f = FourierFunction::from_json(required_object(cfg, "function").dump());
  const double alpha_max = get_number(cfg, "alpha_max", 10000.0);
  const std::uint64_t n = get_uint(cfg, "n", 4096);
  const std::uint64_t points = get_uint(cfg, "points", 201);
  if (!(alpha_max > 0) || points < 2)
    throw ConfigError("bound-scan: alpha_max > 0 and points >= 2 required");

  json resolved{{"process", json::parse(p.to_json())},
                {"coefficients", json::parse(a.to_json())},
                {"function", json::parse(f.to_json())},
                {"alpha_max", alpha_max},
                {"n", n},
                {"points", points}};
  const json manifest = base_manifest(m, resolved);

  std::vector<double> alphas;
  alphas.reserve(points);
  for (std::uint64_t i = 0; i < points; ++i)
    alphas.push_back(-alpha_max + 2.0 * alpha_max * static_cast<double>(i) /
                                      static_cast<double>(points - 1));
  SeriesRealization r(m.seed, p, a, f);
  std::string rows;
  for (const auto& [alpha, ratio] : log_bound_scan(r, alphas, n))
    rows += fmt::format("{},{}\n", alpha, ratio);
  write_file(out / "bound_scan.csv", csv_with_manifest(manifest, "alpha,ratio", rows));
  return 0;
}

int run_sup_stat(const RunManifest& m, const json& cfg,
                 const std::filesystem::path& out) {
  check_keys(cfg, {"process", "coefficients", "M", "Lambda_max", "j_max", "alpha_points",
                   "seeds"},
             "sup-stat config");
  ProcessFamily p = ProcessFamily::from_json(required_object(cfg, "process").dump());
  CoefficientSequence a =
      CoefficientSequence::from_json(required_object(cfg, "coefficients").dump());
  const double M = get_number(cfg, "M", 10.0);
  const std::uint64_t Lambda_max = get_uint(cfg, "Lambda_max", 1024);
  const std::uint64_t j_max = get_uint(cfg, "j_max", 64);
  const std::uint64_t alpha_points = get_uint(cfg, "alpha_points", 128);
  const std::uint64_t n_seeds = get_uint(cfg, "seeds", 16);
  if (n_seeds < 1) throw ConfigError("sup-stat: seeds >= 1 required");

  json resolved{{"process", json::parse(p.to_json())},
                {"coefficients", json::parse(a.to_json())},
                {"M", M},
                {"Lambda_max", Lambda_max},
                {"j_max", j_max},
                {"alpha_points", alpha_points},
                {"seeds", n_seeds}};
  const json manifest = base_manifest(m, resolved);

  const SupStatGrid grid = SupStatGrid::dyadic(
      Lambda_max, static_cast<std::int64_t>(j_max),
      static_cast<std::uint32_t>(alpha_points));
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < n_seeds; ++i) seeds.push_back(m.seed + i);
  const double value = normalized_sup_stat(p, a, M, grid, seeds);
  write_file(out / "sup_stat.json",
             json{{"manifest", manifest}, {"value", value}}.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(const RunManifest& manifest) {
  try {
    if (manifest.threads > 0) set_thread_cap(manifest.threads);
    std::filesystem::path out(manifest.output_dir);
    std::filesystem::create_directories(out);

    json cfg = json::object();
    if (!manifest.config_path.empty())
      cfg = parse_json(read_file(manifest.config_path), manifest.config_path);
    const json overrides = parse_json(manifest.overrides, "flag overrides");
    for (const auto& [key, value] : overrides.items()) cfg[key] = value;

    if (manifest.command == "simulate") return run_simulate(manifest, cfg, out);
    if (manifest.command == "check-conditions")
      return run_check_conditions(manifest, cfg, out);
    if (manifest.command == "check-hypothesis")
      return run_check_hypothesis(manifest, cfg, out);
    if (manifest.command == "counterexample")
      return run_counterexample(manifest, cfg, out);
    if (manifest.command == "bound-scan") return run_bound_scan(manifest, cfg, out);
    if (manifest.command == "sup-stat") return run_sup_stat(manifest, cfg, out);
    throw ConfigError(fmt::format("unknown command \"{}\"", manifest.command));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericRefusal& e) {
    std::cerr << "numeric refusal: " << e.what() << "\n";
    try {
      std::filesystem::path out(manifest.output_dir);
      std::filesystem::create_directories(out);
      write_file(out / "refusal.json",
                 json{{"command", manifest.command},
                      {"seed", manifest.seed},
                      {"refusal", e.what()}}
                     .dump(2) +
                     "\n");
    } catch (...) {
    }
    return 3;
  }
}

}  // namespace rfs
