// rfslab: batch driver for the random-series laboratory. One subcommand per
// process; all numeric work happens in the library.
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rfs/cli.hpp"

namespace {

void add_common(CLI::App* cmd, rfs::RunManifest& m) {
  cmd->add_option("--config", m.config_path, "JSON configuration file");
  cmd->add_option("--seed", m.seed, "base seed for all random draws");
  cmd->add_option("--out", m.output_dir, "output directory");
  cmd->add_option("--format", m.format, "output format (csv|json)");
  cmd->add_option("--threads", m.threads, "worker-thread cap (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for randomly sampled Fourier series"};
  app.require_subcommand(1);

  rfs::RunManifest m;
  nlohmann::json overrides = nlohmann::json::object();

  auto* simulate = app.add_subcommand("simulate", "Cauchy convergence profile");
  add_common(simulate, m);

  auto* conditions =
      app.add_subcommand("check-conditions", "coefficient condition classifier");
  add_common(conditions, m);

  auto* hypothesis = app.add_subcommand("check-hypothesis", "CF tail-sum scans");
  add_common(hypothesis, m);
  hypothesis->add_option("--which", m.which, "H | Hprime | Hsecond");

  std::optional<double> delta;
  std::optional<std::uint64_t> kmax;
  auto* counter = app.add_subcommand("counterexample", "Dirichlet-kernel construction");
  add_common(counter, m);
  counter->add_option("--delta", delta, "power-law exponent of a_k");
  counter->add_option("--kmax", kmax, "largest index k");

  std::optional<double> alpha_max;
  std::optional<std::uint64_t> n_trunc, points;
  auto* bound = app.add_subcommand("bound-scan", "log-bound flatness scan");
  add_common(bound, m);
  bound->add_option("--alpha-max", alpha_max, "scan half-width in alpha");
  bound->add_option("--n", n_trunc, "truncation index");
  bound->add_option("--points", points, "number of alpha points");

  std::optional<std::uint64_t> seeds, Lambda_max, j_max, alpha_points;
  std::optional<double> M;
  auto* sup = app.add_subcommand("sup-stat", "normalized supremum statistic");
  add_common(sup, m);
  sup->add_option("--seeds", seeds, "number of independent seeds");
  sup->add_option("--M", M, "alpha window half-width");
  sup->add_option("--Lambda-max", Lambda_max, "largest block end");
  sup->add_option("--j-max", j_max, "largest |j|");
  sup->add_option("--alpha-points", alpha_points, "alpha grid size");

  CLI11_PARSE(app, argc, argv);

  m.command = app.get_subcommands().front()->get_name();
  if (delta) overrides["delta"] = *delta;
  if (kmax) overrides["kmax"] = *kmax;
  if (alpha_max) overrides["alpha_max"] = *alpha_max;
  if (n_trunc) overrides["n"] = *n_trunc;
  if (points) overrides["points"] = *points;
  if (seeds) overrides["seeds"] = *seeds;
  if (M) overrides["M"] = *M;
  if (Lambda_max) overrides["Lambda_max"] = *Lambda_max;
  if (j_max) overrides["j_max"] = *j_max;
  if (alpha_points) overrides["alpha_points"] = *alpha_points;
  m.overrides = overrides.dump();

  return rfs::run(m);
}
