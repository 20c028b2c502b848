#include "commands.hpp"

#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "csvortex/approx.hpp"
#include "csvortex/error.hpp"
#include "csvortex/liouville.hpp"
#include "csvortex/shooting.hpp"
#include "csvortex/solver.hpp"
#include "csvortex/topological.hpp"
#include "json_io.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "verify.hpp"

namespace csvortex::app {

namespace {

struct Common {
  std::string config;
  std::string eps;
  std::string out;
  bool strict = false;
  bool strict_resolved = false;  // flag or config file
};

RunConfig resolve(Common& c, bool need_eps) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (!c.eps.empty()) cfg.eps = parse_eps_list(c.eps);
  if (!c.out.empty()) cfg.out = c.out;
  if (c.strict) cfg.solver.strict = true;
  if (!need_eps && cfg.eps.empty()) cfg.eps = {0.01};
  cfg.validate();
  c.strict_resolved = cfg.solver.strict;
  return cfg;
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

int cmd_solve_topological(Common& c) {
  const RunConfig cfg = resolve(c, false);
  const GaugeModel model = cfg.model();
  const double R = default_topological_radius(model.p());
  const GridPtr g = make_disk_grid(R, rings_for_step(R, cfg.grid.radial_step), cfg.grid.n_theta);
  const TopologicalSolution sol = solve_topological(model, g, cfg.solver.newton);
  TopologicalSummary sum;
  sum.flux = topological_flux(sol);
  sum.max_U = sol.U.maxCoeff();
  if (model.n1() > 0) {
    sum.decay_rate = decay_fit(sol);
    sum.nondegeneracy = nondegeneracy_estimate(sol, cfg.solver.newton);
  }
  write_file(cfg.out + "_topological.json", dump_json(topological_report_json(sol, sum, cfg.hash())));
  std::ostringstream csv;
  write_field_csv(csv, *g, sol.U, "U");
  write_file(cfg.out + "_topological_U.csv", csv.str());
  std::printf("flux %.10g, max U %.3g, decay rate %.4g -> %s_topological.json\n", sum.flux,
              sum.max_U, sum.decay_rate, cfg.out.c_str());
  return 0;
}

void write_fields(const std::string& prefix, const SolutionFields& f) {
  std::ostringstream os;
  if (f.grid) {
    write_field_csv(os, *f.grid, f.u1, "u1");
    write_file(prefix + "_u1.csv", os.str());
    os.str("");
    write_field_csv(os, *f.grid, f.u2, "u2");
    write_file(prefix + "_u2.csv", os.str());
    return;
  }
  os << "# radial profile, grid " << f.radial->descriptor() << "\nr,u1,u2\n";
  char buf[96];
  for (int i = 0; i < f.radial->size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.radial->r(i), f.u1[i], f.u2[i]);
    os << buf;
  }
  write_file(prefix + "_radial.csv", os.str());
}

int cmd_solve_mixed(Common& c) {
  const RunConfig cfg = resolve(c, true);
  const GaugeModel model = cfg.model();
  // unsupported configurations are rejected before any work starts
  for (const auto& w : check_mixed_case(model, cfg.solver.strict)) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  const std::string hash = cfg.hash();
  std::vector<SolveReport> reps(cfg.eps.size());
  parallel_for(static_cast<int>(cfg.eps.size()), [&](int i) {
    SolutionFields fields;
    reps[i] = solve_mixed(model, cfg.eps[i], cfg.grid, cfg.solver, &fields);
    const std::string prefix = cfg.out + "_eps" + eps_tag(cfg.eps[i]);
    write_file(prefix + ".json", dump_json(solve_report_json(reps[i], model, hash)));
    write_fields(prefix, fields);
  });
  for (const auto& r : reps) {
    std::printf("eps %-8g alpha (%.3e, %.3e)  beta %.8f  residual %.2e  picard %d%s\n", r.eps,
                r.alpha.real(), r.alpha.imag(), r.beta, r.residual, r.picard_iterations,
                r.warnings.empty() ? "" : "  [warnings]");
  }
  return 0;
}

int cmd_shoot(Common& c, double s1, double s2, double horizon) {
  const RunConfig cfg = resolve(c, false);
  const GaugeModel model = cfg.model();
  const ShootingState st = radial_shoot(model, s1, s2, horizon);
  std::ostringstream os;
  os << "r,u1,du1,u2,du2\n";
  char buf[128];
  for (const auto& s : st.trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.r, s.u1, s.du1, s.u2, s.du2);
    os << buf;
  }
  write_file(cfg.out + "_shoot.csv", os.str());
  std::cout << dump_json(shooting_report_json(st, model, horizon));
  return 0;
}

int cmd_dump_approx(Common& c, double alpha_re, double alpha_im) {
  const RunConfig cfg = resolve(c, false);
  const GaugeModel model = cfg.model();
  const double eps = cfg.eps.front();
  const TwoScaleGrids grids = make_two_scale_grids(eps, cfg.grid);
  auto topo = std::make_shared<const TopologicalSolution>(
      solve_topological(model, grids.x, cfg.solver.newton));
  const ApproxSolution ap(model, eps, {alpha_re, alpha_im}, topo);
  const DiskGrid& g = *grids.x;
  Eigen::VectorXd v1(g.size()), v2(g.size());
  for (int k = 0; k < g.size(); ++k) {
    v1[k] = ap.V1(g.node(k));
    v2[k] = ap.V2(g.node(k));
  }
  const std::string prefix = cfg.out + "_approx_eps" + eps_tag(eps);
  std::ostringstream os;
  write_field_csv(os, g, v1, "V1");
  write_file(prefix + "_V1.csv", os.str());
  os.str("");
  write_field_csv(os, g, v2, "V2");
  write_file(prefix + "_V2.csv", os.str());
  std::printf("wrote %s_V1.csv and %s_V2.csv (%d nodes)\n", prefix.c_str(), prefix.c_str(), g.size());
  return 0;
}

int cmd_liouville_table(double radius, double step, int n_theta, double alpha_abs) {
  if (!(radius > 1.0) || !(step > 0.0) || n_theta < 8 || !(alpha_abs >= 0.0)) {
    throw ConfigError("liouville-table: bad grid or alpha");
  }
  const GridPtr g = make_disk_grid(radius, rings_for_step(radius, step), n_theta);
  std::printf("a,b,lambda,alpha_abs,mass,target,rel_err\n");
  for (const auto& [a, b] : admissible_pairs()) {
    for (const Rational lam : {Rational(1), Rational(3, 2), Rational(2), Rational(3)}) {
      for (const double aa : {0.0, alpha_abs}) {
        if (aa > 0.0 && !lam.is_integer()) continue;
        const LiouvilleProfile prof(0.0, std::polar(aa, 0.3), lam, a, b);
        const double m = liouville_mass(prof, *g);
        const double t = 8.0 * std::numbers::pi * lam.value();
        std::printf("%d,%d,%s,%g,%.12g,%.12g,%.3e\n", a, b, lam.str().c_str(), aa, m, t,
                    std::abs(m - t) / t);
        if (alpha_abs == 0.0) break;
      }
    }
  }
  return 0;
}

int cmd_verify(bool quick, std::uint64_t seed, const std::vector<int>& only) {
  const auto results = run_verify({quick, seed}, only);
  int failed = 0;
  for (const auto& r : results) {
    std::puts(format_result(r).c_str());
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"Mixed-type vortex solutions of the rank-2 Chern-Simons system"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool eps) {
    sub->add_option("--config", common.config, "JSON run configuration")->check(CLI::ExistingFile);
    if (eps) sub->add_option("--eps", common.eps, "comma separated, strictly decreasing");
    sub->add_option("--out", common.out, "output prefix");
    sub->add_flag("--strict", common.strict, "treat unsupported cases and non-convergence as errors");
  };

  auto* topo = app.add_subcommand("solve-topological", "U(1) topological solution for the p vortices");
  add_common(topo, false);

  auto* mixed = app.add_subcommand("solve-mixed", "mixed-type solution for each eps");
  add_common(mixed, true);

  double s1 = 0.0, s2 = 0.0, horizon = 1e4;
  auto* shoot = app.add_subcommand("shoot-radial", "radial shooting from u_j = 2 N_j ln r + s_j");
  add_common(shoot, false);
  shoot->add_option("--s1", s1)->required();
  shoot->add_option("--s2", s2)->required();
  shoot->add_option("--horizon", horizon, "classification radius")->capture_default_str();

  double are = 0.0, aim = 0.0;
  auto* approx = app.add_subcommand("dump-approx", "approximate pair (V1, V2) on the x-grid");
  add_common(approx, true);
  approx->add_option("--alpha-re", are)->capture_default_str();
  approx->add_option("--alpha-im", aim)->capture_default_str();

  double radius = 1e3, step = 0.025, alpha_abs = 0.2;
  int n_theta = 64;
  auto* table = app.add_subcommand("liouville-table", "Liouville mass for every admissible pair");
  table->add_option("--radius", radius)->capture_default_str();
  table->add_option("--step", step)->capture_default_str();
  table->add_option("--n-theta", n_theta)->capture_default_str();
  table->add_option("--alpha", alpha_abs, "|alpha| for integer lambda")->capture_default_str();

  bool quick = false;
  std::uint64_t seed = 1;
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "run the property suite and print a pass/fail table");
  verify->add_flag("--quick", quick, "reduced sample counts");
  verify->add_option("--seed", seed)->capture_default_str();
  verify->add_option("--only", only, "check ids 1-9")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*topo) return cmd_solve_topological(common);
    if (*mixed) return cmd_solve_mixed(common);
    if (*shoot) return cmd_shoot(common, s1, s2, horizon);
    if (*approx) return cmd_dump_approx(common, are, aim);
    if (*table) return cmd_liouville_table(radius, step, n_theta, alpha_abs);
    if (*verify) return cmd_verify(quick, seed, only);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const UnsupportedConfiguration& e) {
    const std::string msg = e.what();
    const bool tagged = msg.rfind("unsupported configuration", 0) == 0;
    std::fprintf(stderr, "error: %s%s\n", tagged ? "" : "unsupported configuration: ", e.what());
    return 2;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "error: %s (last residual %.3e)\n", e.what(), e.last_residual);
    return common.strict_resolved ? 3 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace csvortex::app
