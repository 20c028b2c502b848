#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "csvortex/model.hpp"
#include "csvortex/solver.hpp"

namespace csvortex::app {

/// Everything a run needs; see docs/config.md for the file format.
struct RunConfig {
  int a = 1;
  int b = 1;
  std::vector<Point> p;
  std::vector<Point> q;
  MixedGridOptions grid;
  SolverOptions solver;
  std::vector<double> eps;
  std::string out = "csvortex";
  std::uint64_t seed = 1;

  GaugeModel model() const { return GaugeModel(a, b, p, q); }
  /// Canonical JSON: fixed key order, defaults filled in.
  nlohmann::ordered_json to_json() const;
  /// Hash of the canonical JSON without `out`.
  std::string hash() const;
  /// Checks the invariants: eps positive and strictly decreasing, resolutions above the
  /// minimums, d in (0, 1/4). Throws ConfigError naming the field.
  void validate() const;
};

/// Parses a config file. Syntax errors report line and column, schema errors the field path.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// Comma separated list of positive numbers, e.g. "0.02,0.01".
std::vector<double> parse_eps_list(const std::string& text);

}  // namespace csvortex::app
