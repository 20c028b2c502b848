#include "csvortex/topological.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "csvortex/error.hpp"
#include "csvortex/linear.hpp"

namespace csvortex {

double f_eval(double t) {
  const double e = std::exp(t);
  return e * (1.0 - e);
}

double f_prime(double t) {
  const double e = std::exp(t);
  return e - 2.0 * e * e;
}

double background_u0(const std::vector<Point>& p, Point x) {
  double s = 0.0;
  for (const auto& pj : p) {
    const double d2 = std::norm(x - pj);
    s += std::log(d2) - std::log1p(d2);
  }
  return s;
}

double background_g(const std::vector<Point>& p, Point x) {
  double s = 0.0;
  for (const auto& pj : p) {
    const double d = 1.0 + std::norm(x - pj);
    s += 4.0 / (d * d);
  }
  return s;
}

Background build_background(const std::vector<Point>& p, GridPtr grid) {
  Background bg{ScalarField(grid), ScalarField(grid)};
  for (int k = 0; k < grid->size(); ++k) {
    const Point x = grid->node(k);
    for (const auto& pj : p) {
      if (std::abs(x - pj) < 1e-12) throw GridError("vortex point coincides with a grid node");
    }
    bg.u0.values[k] = background_u0(p, x);
    bg.g.values[k] = background_g(p, x);
  }
  return bg;
}

double TopologicalSolution::eval(Point x) const {
  if (std::abs(x) > grid->radial().r_out()) return 0.0;
  return background_u0(p, x) + interpolate(*grid, v, x, 0.0);
}

double TopologicalSolution::eval_v(Point x) const {
  if (std::abs(x) > grid->radial().r_out()) return -background_u0(p, x);
  return interpolate(*grid, v, x, 0.0);
}

double default_topological_radius(const std::vector<Point>& p) {
  double m = 0.0;
  for (const auto& x : p) m = std::max(m, std::abs(x));
  return 30.0 + 2.0 * m;
}

namespace {

// Beyond this distance from every vortex the source is -Delta_h u0 instead of g. The discrete
// equation there reads Delta_h U + f(U) = 0, so the discrete maximum principle keeps U <= 0;
// with the exact g, the O(h^2) error of Delta_h v (v ~ 1/r^2) exceeds U itself far out.
constexpr double kDiscreteSourceRadius = 8.0;

// Residual Delta v + f(u0 + v) - src at interior nodes; U = u0 + v = 0 on the ring.
Eigen::VectorXd residual(const DiskGrid& g, const Eigen::VectorXd& u0, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& src) {
  Eigen::VectorXd r = apply_laplacian(g, v);
  for (int k = 0; k < g.size(); ++k) {
    r[k] = g.is_boundary(k) ? u0[k] + v[k] : r[k] + f_eval(u0[k] + v[k]) - src[k];
  }
  return r;
}

template <class ResidualFn, class JacobianFn, class NormFn>
void newton(Eigen::VectorXd& v, ResidualFn&& res, JacobianFn&& jac, NormFn&& norm,
            const NewtonOptions& opt,
            std::vector<double>& history, int* iterations) {
  Eigen::VectorXd r = res(v);
  double rn = norm(r);
  history.push_back(rn);
  int it = 0;
  while (rn > opt.tol) {
    if (++it > opt.max_iter) throw ConvergenceError("Newton iteration did not converge", rn);
    const SparseSolver lu(jac(v));
    const Eigen::VectorXd dv = lu.solve(-r);
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h) {
      Eigen::VectorXd trial = v + step * dv;
      Eigen::VectorXd rt = res(trial);
      const double rtn = norm(rt);
      if (std::isfinite(rtn) && rtn <= (1.0 - 1e-4 * step) * rn) {
        v = std::move(trial);
        r = std::move(rt);
        rn = rtn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Stagnation at round-off level counts as converged only if already tiny.
      if (rn <= 100.0 * opt.tol) break;
      throw ConvergenceError("Newton line search failed", rn);
    }
    history.push_back(rn);
  }
  if (iterations) *iterations = it;
}

}  // namespace

TopologicalSolution solve_topological(const std::vector<Point>& p, GridPtr grid,
                                      const NewtonOptions& opt) {
  if (grid->radial().interior() < 3) throw GridError("grid too coarse for the topological solve");
  const Background bg = build_background(p, grid);
  TopologicalSolution sol;
  sol.grid = grid;
  sol.p = p;
  sol.u0 = bg.u0.values;
  sol.v = Eigen::VectorXd::Zero(grid->size());
  const DiskGrid& g = *grid;
  for (int k = g.interior_size(); k < g.size(); ++k) sol.v[k] = -sol.u0[k];
  const Eigen::VectorXd& u0 = sol.u0;
  Eigen::VectorXd src = bg.g.values;
  const Eigen::VectorXd lap_u0 = apply_laplacian(g, u0);
  for (int k = 0; k < g.interior_size(); ++k) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& pj : p) dmin = std::min(dmin, std::abs(g.node(k) - pj));
    if (dmin > kDiscreteSourceRadius) src[k] = -lap_u0[k];
  }
  if (!p.empty()) {
    auto res = [&](const Eigen::VectorXd& v) { return residual(g, u0, v, src); };
    auto jac = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd pot(g.size());
      for (int k = 0; k < g.size(); ++k) pot[k] = f_prime(u0[k] + v[k]);
      return dirichlet_operator(g, pot);
    };
    newton(sol.v, res, jac, [&](const Eigen::VectorXd& r) { return norm_L2(g, r); }, opt, sol.residual_history, &sol.iterations);
  } else {
    sol.residual_history.push_back(0.0);
  }
  sol.U = sol.u0 + sol.v;
  return sol;
}

TopologicalSolution solve_topological(const GaugeModel& model, GridPtr grid,
                                      const NewtonOptions& opt) {
  return solve_topological(model.p(), std::move(grid), opt);
}

double topological_flux(const TopologicalSolution& sol) {
  Eigen::VectorXd f(sol.U.size());
  for (int k = 0; k < f.size(); ++k) f[k] = f_eval(sol.U[k]);
  return integrate(*sol.grid, f) / (4.0 * std::numbers::pi);
}

NondegeneracyReport nondegeneracy_estimate(const TopologicalSolution& sol,
                                           const NewtonOptions& opt) {
  auto sigma_of = [](const TopologicalSolution& s) {
    Eigen::VectorXd pot(s.U.size());
    for (int k = 0; k < pot.size(); ++k) pot[k] = f_prime(s.U[k]);
    return smallest_singular_value(*s.grid, pot).value;
  };
  NondegeneracyReport rep;
  rep.sigma = sigma_of(sol);
  rep.grid_hash = sol.grid->hash();
  const auto& rg = sol.grid->radial();
  auto fine = make_disk_grid(rg.r_out(), 2 * rg.interior(), 2 * sol.grid->n_theta(), rg.scale());
  const TopologicalSolution refined = solve_topological(sol.p, fine, opt);
  rep.sigma_refined = sigma_of(refined);
  rep.refined_grid_hash = fine->hash();
  rep.ratio = rep.sigma_refined / rep.sigma;
  return rep;
}

double decay_fit(const TopologicalSolution& sol, double r_lo, double r_hi, double floor) {
  const DiskGrid& g = *sol.grid;
  if (r_hi <= 0.0) r_hi = 0.5 * g.radial().r_out();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (int k = 0; k < g.size(); ++k) {
    const double r = std::abs(g.node(k));
    const double u = std::abs(sol.U[k]);
    if (r < r_lo || r > r_hi || !(u > floor)) continue;
    const double y = std::log(u);
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || !(den > 0.0)) throw GridError("decay fit annulus empty (|U| below floor)");
  return (n * sxy - sx * sy) / den;
}

RadialTopological solve_topological_radial(int n1, const RadialGrid& grid,
                                           const NewtonOptions& opt) {
  if (n1 < 0) throw ConfigError("negative vortex count");
  const int m = grid.size();
  Eigen::VectorXd u0(m), src(m);
  for (int i = 0; i < m; ++i) {
    const double r2 = grid.r(i) * grid.r(i);
    u0[i] = n1 * (std::log(r2) - std::log1p(r2));
    src[i] = n1 * 4.0 / ((1.0 + r2) * (1.0 + r2));
  }
  const Eigen::VectorXd lap_u0 = apply_radial_laplacian(grid, u0);
  for (int i = 0; i < grid.interior(); ++i) {
    if (grid.r(i) > kDiscreteSourceRadius) src[i] = -lap_u0[i];
  }
  RadialTopological out{grid, Eigen::VectorXd::Zero(m), {}};
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  v[grid.interior()] = -u0[grid.interior()];
  if (n1 > 0) {
    auto res = [&](const Eigen::VectorXd& w) {
      Eigen::VectorXd r = apply_radial_laplacian(grid, w);
      for (int i = 0; i < grid.interior(); ++i) r[i] += f_eval(u0[i] + w[i]) - src[i];
      r[grid.interior()] = u0[grid.interior()] + w[grid.interior()];
      return r;
    };
    auto jac = [&](const Eigen::VectorXd& w) {
      Eigen::VectorXd pot(m);
      for (int i = 0; i < m; ++i) pot[i] = f_prime(u0[i] + w[i]);
      return dirichlet_operator_radial(grid, pot);
    };
    newton(v, res, jac,
           [&](const Eigen::VectorXd& r) { return std::sqrt(integrate_radial(grid, r.cwiseAbs2())); },
           opt, out.residual_history, nullptr);
  }
  out.U = u0 + v;
  return out;
}

}  // namespace csvortex
