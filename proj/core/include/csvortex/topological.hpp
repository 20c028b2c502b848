#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "csvortex/grid.hpp"
#include "csvortex/model.hpp"

namespace csvortex {

/// f(t) = e^t (1 - e^t).
double f_eval(double t);
/// f'(t) = e^t - 2 e^{2t}.
double f_prime(double t);

/// u0 = sum_j ln(|x-p_j|^2 / (1+|x-p_j|^2)); Delta u0 = sum 4 pi delta_{p_j} - g.
double background_u0(const std::vector<Point>& p, Point x);
/// g = sum_j 4 / (1+|x-p_j|^2)^2.
double background_g(const std::vector<Point>& p, Point x);

struct Background {
  ScalarField u0;
  ScalarField g;
};
/// Throws GridError when a vortex point coincides with a node.
Background build_background(const std::vector<Point>& p, GridPtr grid);

struct NewtonOptions {
  double tol = 1e-9;        // L2 norm of the discrete residual
  int max_iter = 60;
  int max_halvings = 30;
};

/// U = u0 + v solving Delta U + f(U) = 4 pi sum delta_{p_j}, with U = 0 on the boundary ring.
/// (u0 itself only decays like |x|^-2, so v carries -u0 there.)
struct TopologicalSolution {
  GridPtr grid;
  std::vector<Point> p;
  Eigen::VectorXd u0;
  Eigen::VectorXd v;
  Eigen::VectorXd U;
  std::vector<double> residual_history;
  int iterations = 0;

  double residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
  /// U at an arbitrary point: u0 plus interpolated v inside the grid, zero beyond it.
  double eval(Point x) const;
  /// v = U - u0 at an arbitrary point.
  double eval_v(Point x) const;
};

/// 30 + 2 max|p_j|.
double default_topological_radius(const std::vector<Point>& p);

TopologicalSolution solve_topological(const std::vector<Point>& p, GridPtr grid,
                                      const NewtonOptions& opt = {});
TopologicalSolution solve_topological(const GaugeModel& model, GridPtr grid,
                                      const NewtonOptions& opt = {});

/// int e^U (1 - e^U) dx / (4 pi); equals N1 for the exact solution.
double topological_flux(const TopologicalSolution& sol);

struct NondegeneracyReport {
  double sigma = 0.0;          // smallest singular value on the given grid
  double sigma_refined = 0.0;  // same on a grid with doubled resolution
  double ratio = 0.0;          // sigma_refined / sigma
  std::string grid_hash;
  std::string refined_grid_hash;
  bool stable() const { return ratio >= 0.8 && ratio <= 1.25; }
};

/// Smallest singular value of Delta + f'(U) with Dirichlet data, refined once.
NondegeneracyReport nondegeneracy_estimate(const TopologicalSolution& sol,
                                           const NewtonOptions& opt = {});

/// Least-squares slope of ln|U| against |x| on r_lo <= |x| <= r_hi where |U| > floor.
/// r_hi <= 0 selects half the grid radius. Throws GridError when no node qualifies.
double decay_fit(const TopologicalSolution& sol, double r_lo = 4.0, double r_hi = 0.0,
                 double floor = 1e-12);

/// Radial solve for N1 vortices at the origin on the radial nodes of a disk grid.
struct RadialTopological {
  RadialGrid grid;
  Eigen::VectorXd U;
  std::vector<double> residual_history;
};
RadialTopological solve_topological_radial(int n1, const RadialGrid& grid,
                                           const NewtonOptions& opt = {});

}  // namespace csvortex
