#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "csvortex/grid.hpp"
#include "csvortex/model.hpp"

namespace csvortex {

enum class SolutionClass { Topological, NonTopological, MixedI, MixedII, Undetermined };

std::string to_string(SolutionClass c);

/// Right-hand sides of the radial system: Delta u_j = -F_j(u1, u2) away from the vortices.
double radial_force_1(int a, int b, double u1, double u2);
double radial_force_2(int a, int b, double u1, double u2);

struct ShootingSample {
  double r = 0.0;
  double u1 = 0.0;
  double du1 = 0.0;  // d/dr
  double u2 = 0.0;
  double du2 = 0.0;
};

struct ShootingOptions {
  double r0 = 1e-6;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int samples = 400;  // log-spaced trajectory samples on [r0, horizon]
  double blowup_value = 30.0;
  /// A component has a finite limit when |r u'| stays below this on the tail window.
  double finite_slope_tol = 0.05;
  /// A component tends to -inf when r u' stays below minus this on the tail window.
  double decay_slope_min = 0.5;
  /// Tail window is [horizon * tail_fraction, horizon].
  double tail_fraction = 0.25;
};

struct ShootingState {
  double s1 = 0.0;
  double s2 = 0.0;
  double r = 0.0;  // last radius reached
  double u1 = 0.0;
  double du1 = 0.0;
  double u2 = 0.0;
  double du2 = 0.0;
  SolutionClass cls = SolutionClass::Undetermined;
  double blowup_radius = 0.0;  // zero unless the integration stopped early
  std::vector<ShootingSample> trajectory;
};

/// Integrates the radial system in s = ln r from the local expansion
/// u_j = 2 N_j ln r + s_j at r0 up to `horizon`, then classifies the tail.
/// All vortices of the model must sit at the origin.
ShootingState radial_shoot(const GaugeModel& model, double s1, double s2, double horizon,
                           const ShootingOptions& opt = {});

/// Classification from two tail samples (inner, outer), both past the horizon window.
SolutionClass classify_tail(const ShootingSample& inner, const ShootingSample& outer,
                            const ShootingOptions& opt = {});

/// Cross-check of a tabulated radial profile (values at the nodes of `g`) against the ODE.
/// The profile is re-integrated in short segments, each started from nodal values and
/// central-difference slopes and compared with the table at its end node. Around the
/// equilibrium u1 = -ln 2 perturbations grow like e^r, so a segment spans at most
/// `max_span` in r and nodes spaced wider than that are not re-integrated. The direct
/// substitution residual |Delta_h u_j + F_j(u)| covers every interior node.
struct ProfileCheckOptions {
  int segment_nodes = 200;
  double max_span = 1.0;
  ShootingOptions shooting;
};

struct ProfileCheck {
  double max_deviation = 0.0;  // max over segment ends of |u_j(ode) - u_j(table)|
  double worst_radius = 0.0;
  int segments = 0;
  double covered_radius = 0.0;  // outer end of the last segment
  double max_substitution = 0.0;
  SolutionClass cls = SolutionClass::Undetermined;
  double u1_tail = 0.0;        // u1 at the last interior node
  double u2_tail_slope = 0.0;  // r u2' there
};

ProfileCheck check_radial_profile(int a, int b, const RadialGrid& g, const Eigen::VectorXd& u1,
                                  const Eigen::VectorXd& u2, const ProfileCheckOptions& opt = {});

}  // namespace csvortex
