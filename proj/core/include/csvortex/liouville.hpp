#pragma once

#include <Eigen/Core>
#include <complex>

#include "csvortex/grid.hpp"
#include "csvortex/model.hpp"

namespace csvortex {

/// W_{mu,alpha}(z) = ln(32 e^mu lambda^2 |z|^{2 lambda - 2} / ((4-ab)(2+b)(1 + e^mu |z^lambda + alpha|^2)^2)).
struct LiouvilleProfile {
  double mu = 0.0;
  std::complex<double> alpha{0.0, 0.0};
  Rational lambda{1};
  int a = 1;
  int b = 1;

  LiouvilleProfile() = default;
  LiouvilleProfile(double mu, std::complex<double> alpha, Rational lambda, int a, int b);
  static LiouvilleProfile for_model(const GaugeModel& m, std::complex<double> alpha = {});

  /// (1/4)(4-ab)(2+b).
  double coefficient() const { return 0.25 * (4.0 - a * b) * (2.0 + b); }
};

/// z^lambda (principal branch for half-integer lambda).
std::complex<double> zpow(std::complex<double> z, const Rational& lambda);

double eval_W(const LiouvilleProfile& p, std::complex<double> z);
/// W - (2 lambda - 2) ln|z|, finite at the origin.
double eval_W_star(const LiouvilleProfile& p, std::complex<double> z);
/// (1/4)(4-ab)(2+b) e^W, safe at z = 0.
double eval_weight(const LiouvilleProfile& p, std::complex<double> z);
/// e^W, safe at z = 0.
double eval_expW(const LiouvilleProfile& p, std::complex<double> z);
/// Gradient of W as a complex number dW/dx1 + i dW/dx2; z != 0.
std::complex<double> eval_grad_W(const LiouvilleProfile& p, std::complex<double> z);

/// Kernel functions Z_{alpha,j}, j = 0, 1, 2 (mu = 0).
double eval_Z(std::complex<double> alpha, const Rational& lambda, int j, std::complex<double> z);
/// Z_alpha = Z_{alpha,1} + i Z_{alpha,2}.
std::complex<double> eval_Z_complex(std::complex<double> alpha, const Rational& lambda,
                                    std::complex<double> z);

/// Discrete Delta W + (1/4)(4-ab)(2+b) e^W at interior nodes with |x| >= r_min.
/// Other entries are zero. For lambda > 1 the origin must be excluded (r_min > 0).
ScalarField liouville_residual(const LiouvilleProfile& p, GridPtr grid, double r_min = 0.0);

/// int (1/4)(4-ab)(2+b) e^W over the grid disk.
double liouville_mass(const LiouvilleProfile& p, const DiskGrid& grid);

/// Entries a_jk = int sigma^{-2-2d} Z_{alpha,j} Z_{alpha,k}, j, k in {1, 2}.
Eigen::Matrix2d gram_matrix(std::complex<double> alpha, const Rational& lambda,
                            const DiskGrid& grid, const WeightParams& w);

struct Projection {
  Eigen::VectorXd values;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Precomputed data for T_alpha on one grid.
class ProjectorT {
 public:
  ProjectorT(std::complex<double> alpha, Rational lambda, GridPtr grid, WeightParams w);

  bool is_identity() const { return identity_; }
  const Eigen::Matrix2d& gram() const { return gram_; }
  Projection apply(const Eigen::VectorXd& h) const;

 private:
  bool identity_;
  GridPtr grid_;
  Eigen::Matrix2d gram_ = Eigen::Matrix2d::Zero();
  Eigen::VectorXd z1_, z2_;        // Z_{alpha,j} at nodes
  Eigen::VectorXd wz1_, wz2_;      // sigma^{-2-2d} Z_{alpha,j}
};

/// T_alpha h = h - c1 sigma^{-2-2d} Z_{alpha,1} - c2 sigma^{-2-2d} Z_{alpha,2}; identity for
/// non-integer lambda. Throws LinearSolveError when the Gram determinant is below
/// 1e-6 a_11(0)^2.
Projection project_T(std::complex<double> alpha, const Rational& lambda, const ScalarField& h,
                     const WeightParams& w = {});

/// ||L_{2,alpha} Z_{alpha,j}||_Y on the grid, boundary ring excluded.
double kernel_annihilation_check(std::complex<double> alpha, const Rational& lambda, int j,
                                 GridPtr grid, const WeightParams& w = {});

}  // namespace csvortex
