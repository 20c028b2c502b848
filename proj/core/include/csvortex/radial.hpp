#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "csvortex/grid.hpp"

namespace csvortex {

/// Radial construction for lambda = 1 (no vortices):
///   u1 = -ln 2 + eps xi(r),  u2 = W0(eps r) + 2 ln eps - (b/2) eps xi(r) + eps eta(eps r).
/// Both scales share their t nodes, so xi(r_k) and eta(eps r_k) sit at the same index.
struct Lambda1Options {
  double r_out_y = 1e6;
  double radial_step = 2e-4;
  double picard_tol = 1e-9;
  int max_picard = 200;
  double ball_radius = 1e3;
  double beta_fit_lo = 1e4;  // fit window in the eps-scale variable
  double beta_fit_hi = 1e5;
  WeightParams weight;
};

struct Lambda1Solution {
  Lambda1Solution(int a_, int b_, double eps_, RadialGrid x, RadialGrid y)
      : a(a_), b(b_), eps(eps_), xgrid(std::move(x)), ygrid(std::move(y)) {}

  int a = 1;
  int b = 1;
  double eps = 0.0;
  RadialGrid xgrid;
  RadialGrid ygrid;
  Eigen::VectorXd xi;   // at x-grid nodes
  Eigen::VectorXd eta;  // at y-grid nodes
  Eigen::VectorXd u1;   // at x-grid nodes
  Eigen::VectorXd u2;
  std::vector<double> differences;
  int iterations = 0;
  bool converged = false;
  double contraction_ratio = 0.0;
  double h1_norm = 0.0;  // ||h1(xi, eta)|| at the final iterate
  double xi_norm = 0.0;
  double eta_norm = 0.0;
  double log_coefficient = 0.0;  // c in eta ~ c ln y
  double residual_eq1 = 0.0;
  double residual_eq2 = 0.0;
  double beta = 0.0;
  double sup_u1_deviation = 0.0;  // sup |u1 + ln 2|

  /// Profiles and r-derivatives at any r inside the x-grid (linear interpolation in t).
  double eval_u1(double r) const;
  double eval_u2(double r) const;
};

Lambda1Solution solve_lambda1(int a, int b, double eps, const Lambda1Options& opt = {});

/// h_{1,eps}(xi, eta) and h_{2,eps}(xi, eta) at shared nodes; exposed for tests.
Eigen::VectorXd lambda1_h1(int a, int b, double eps, const RadialGrid& ygrid,
                           const Eigen::VectorXd& xi, const Eigen::VectorXd& eta);
Eigen::VectorXd lambda1_h2(int a, int b, double eps, const RadialGrid& ygrid,
                           const Eigen::VectorXd& xi, const Eigen::VectorXd& eta);

}  // namespace csvortex
