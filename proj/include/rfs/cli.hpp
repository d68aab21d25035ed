#pragma once

#include <cstdint>
#include <string>

namespace rfs {

// Batch experiment driver shared by the rfslab binary and the test suites.
// Exit codes: 0 success, 2 config error, 3 numeric refusal.
struct RunManifest {
  std::string command;  // simulate | check-conditions | check-hypothesis |
                        // counterexample | bound-scan | sup-stat
  std::string config_path;
  std::uint64_t seed = 42;
  std::string output_dir = ".";
  std::string format = "json";  // csv | json (csv commands always emit csv)
  std::string which = "H";      // hypothesis selector for check-hypothesis
  unsigned threads = 0;
  // Command-line overrides (delta, kmax, alpha_max, n, points, seeds, M,
  // Lambda_max, j_max, alpha_points, quadrature_points) as a JSON object;
  // they take precedence over the config file and are embedded in the
  // emitted manifest.
  std::string overrides = "{}";
};

int run(const RunManifest& manifest);

}  // namespace rfs
