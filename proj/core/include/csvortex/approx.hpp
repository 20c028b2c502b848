#pragma once

#include <complex>
#include <memory>

#include "csvortex/liouville.hpp"
#include "csvortex/model.hpp"
#include "csvortex/topological.hpp"

namespace csvortex {

struct PQ {
  double P = 1.0;
  double Q = 1.0;
};

/// P_eps(x) = prod |x - eps p_j|, Q_eps(x) = prod |x - eps q_k|; empty products are 1.
PQ eval_PQ(const GaugeModel& model, double eps, Point x);

/// Cut-off chi(|x|) with radial derivatives; quintic smoothstep on 1/2 <= |x| <= 1.
struct CutoffValue {
  double chi = 0.0;
  double d1 = 0.0;  // d chi / dr
  double d2 = 0.0;  // d^2 chi / dr^2
};
CutoffValue cutoff_profile(double r);
double eval_cutoff(Point x);

/// phi_eps(z) = -(ab/2) e^{W_alpha(eps z)} chi(z).
double eval_phi(const LiouvilleProfile& prof, double eps, Point z);
/// Closed-form Laplacian of phi_eps.
double eval_laplacian_phi(const LiouvilleProfile& prof, double eps, Point z);

/// 1 + 5 max(|p_j|, |q_k|).
double far_field_radius(const GaugeModel& model);

/// H_eps(x) = b ln P_eps + 2 ln Q_eps - (bN1 + 2N2) ln|x|; requires |x| >= R0 eps.
double eval_H(const GaugeModel& model, double eps, Point x);
/// Quadratic far-field term A(x); zero when all vortices sit at the origin.
double eval_A(const GaugeModel& model, Point x);

/// A(x)|x|^2 = A1 cos 2 theta + A2 sin 2 theta.
struct FarFieldData {
  double R0 = 1.0;
  double A1 = 0.0;
  double A2 = 0.0;
};
FarFieldData far_field_data(const GaugeModel& model);

/// The approximate pair (V1, V2) for given eps and alpha. V2 excludes the 2 ln eps shift.
///
/// Logarithmic singularities are combined before evaluation: with U = u0 + v,
///   V2(x) = W*(eps x) + (2 lambda - 2) ln eps + (b/2) sum ln(1+|x-p|^2) + 2 sum ln|x-q|
///           - (b/2) v(x) - (b/2) eps^2 phi(x),
/// which is finite at every p_j.
class ApproxSolution {
 public:
  ApproxSolution(GaugeModel model, double eps, std::complex<double> alpha,
                 std::shared_ptr<const TopologicalSolution> topo);

  const GaugeModel& model() const { return model_; }
  const LiouvilleProfile& profile() const { return prof_; }
  double eps() const { return eps_; }
  std::complex<double> alpha() const { return prof_.alpha; }
  const TopologicalSolution& topological() const { return *topo_; }

  double V1(Point x) const;
  double V2(Point x) const;
  /// V2 written in y = eps x, used wherever the eps-scale grid is sampled.
  double V2_rescaled(Point y) const;

  /// The sum of ln terms (b/2) sum ln(1+|x-p|^2) + 2 sum ln|x-q|.
  double log_terms(Point x) const;

  /// Straight evaluation of V2 + (b/2)(U + eps^2 phi) - b ln P(eps x) - 2 ln Q(eps x) - W*(eps x).
  double identity_defect_V2(Point x) const;
  /// V1 + ln 2 - U - eps^2 phi.
  double identity_defect_V1(Point x) const;

 private:
  GaugeModel model_;
  double eps_;
  LiouvilleProfile prof_;
  std::shared_ptr<const TopologicalSolution> topo_;
};

}  // namespace csvortex
