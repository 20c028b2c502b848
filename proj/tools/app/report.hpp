#pragma once

#include <string>

#include "json.hpp"

#include "csvortex/model.hpp"
#include "csvortex/shooting.hpp"
#include "csvortex/solver.hpp"
#include "csvortex/topological.hpp"

namespace csvortex::app {

nlohmann::ordered_json model_json(const GaugeModel& model);

nlohmann::ordered_json solve_report_json(const SolveReport& rep, const GaugeModel& model,
                                         const std::string& config_hash);

struct TopologicalSummary {
  double flux = 0.0;
  double max_U = 0.0;
  double decay_rate = 0.0;
  NondegeneracyReport nondegeneracy;
};

nlohmann::ordered_json topological_report_json(const TopologicalSolution& sol,
                                               const TopologicalSummary& sum,
                                               const std::string& config_hash);

nlohmann::ordered_json shooting_report_json(const ShootingState& st, const GaugeModel& model,
                                            double horizon);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace csvortex::app
