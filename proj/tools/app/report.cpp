#include "report.hpp"

#include <filesystem>
#include <fstream>

#include "csvortex/error.hpp"

namespace csvortex::app {

using nlohmann::ordered_json;

ordered_json model_json(const GaugeModel& model) {
  auto pts = [](const std::vector<Point>& v) {
    ordered_json arr = ordered_json::array();
    for (const Point& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
  };
  return {{"a", model.a()},           {"b", model.b()},
          {"n1", model.n1()},         {"n2", model.n2()},
          {"lambda", model.lambda().str()},
          {"p_centered", pts(model.p())},
          {"q_centered", pts(model.q())}};
}

ordered_json solve_report_json(const SolveReport& rep, const GaugeModel& model,
                               const std::string& config_hash) {
  ordered_json j;
  j["kind"] = "solve-mixed";
  j["config_hash"] = config_hash;
  j["x_grid_hash"] = rep.x_grid_hash;
  j["y_grid_hash"] = rep.y_grid_hash;
  j["model"] = model_json(model);
  j["eps"] = rep.eps;
  j["alpha"] = {rep.alpha.real(), rep.alpha.imag()};
  j["beta"] = rep.beta;
  j["beta_limit"] = rep.beta_limit;
  j["iterations"] = {{"picard", rep.picard_iterations}, {"alpha", rep.alpha_iterations}};
  j["norms"] = {{"g1_initial", rep.g1_initial},
                {"g1", rep.g1_norm},
                {"Tg2", rep.Tg2_norm},
                {"xi_H2", rep.xi_norm},
                {"eta_X", rep.eta_norm},
                {"reduced_map_abs", rep.reduced_map_abs},
                {"c1", rep.c1},
                {"c2", rep.c2},
                {"contraction_ratio", rep.contraction_ratio},
                {"log_coefficient", rep.log_coefficient}};
  j["residual"] = rep.residual;
  j["sup_u1_deviation"] = rep.sup_u1_deviation;
  j["rescaled_deviation"] = rep.rescaled_deviation;
  j["rescaled_deviation_limit"] = rep.rescaled_deviation_limit;
  j["nondegeneracy"] = rep.nondegeneracy;
  j["converged"] = {{"picard", rep.picard_converged},
                    {"alpha", rep.alpha_converged},
                    {"residual", rep.residual_ok}};
  j["warnings"] = rep.warnings;
  return j;
}

ordered_json topological_report_json(const TopologicalSolution& sol, const TopologicalSummary& sum,
                                     const std::string& config_hash) {
  ordered_json j;
  j["kind"] = "solve-topological";
  j["config_hash"] = config_hash;
  j["grid_hash"] = sol.grid->hash();
  j["n1"] = static_cast<int>(sol.p.size());
  j["newton_iterations"] = sol.iterations;
  j["newton_residual"] = sol.residual();
  j["flux"] = sum.flux;
  j["max_U"] = sum.max_U;
  j["decay_rate"] = sum.decay_rate;
  j["nondegeneracy"] = {{"sigma", sum.nondegeneracy.sigma},
                        {"sigma_refined", sum.nondegeneracy.sigma_refined},
                        {"ratio", sum.nondegeneracy.ratio},
                        {"stable", sum.nondegeneracy.stable()},
                        {"refined_grid_hash", sum.nondegeneracy.refined_grid_hash}};
  return j;
}

ordered_json shooting_report_json(const ShootingState& st, const GaugeModel& model, double horizon) {
  ordered_json j;
  j["kind"] = "shoot-radial";
  j["model"] = model_json(model);
  j["s1"] = st.s1;
  j["s2"] = st.s2;
  j["horizon"] = horizon;
  j["classification"] = to_string(st.cls);
  j["r"] = st.r;
  j["u1"] = st.u1;
  j["u2"] = st.u2;
  j["r_du1"] = st.r * st.du1;
  j["r_du2"] = st.r * st.du2;
  j["blowup_radius"] = st.blowup_radius;
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

}  // namespace csvortex::app
