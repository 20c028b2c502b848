#pragma once

#include <Eigen/Core>
#include <cmath>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "csvortex/model.hpp"

namespace csvortex {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Exponent d of the weights sigma^{1+d}, sigma^{-1-d}; must lie in (0, 1/4).
struct WeightParams {
  double d = 0.1;
  void validate() const;
};

/// sigma(x) = 1 + |x|.
double sigma(Point x);

/// Radial nodes r_i = s sinh((i + 1/2) h) for i < n, plus the boundary node r_n = R.
///
/// The map is odd in t, so the half-offset nodes sit symmetrically about the origin and the
/// flux through r = 0 vanishes identically in the conservative stencil. Far from the origin
/// the spacing is uniform in ln r.
class RadialGrid {
 public:
  RadialGrid(double r_out, int n_interior, double scale = 1.0);

  int interior() const { return n_; }
  int size() const { return n_ + 1; }
  double h() const { return h_; }
  double scale() const { return s_; }
  double r_out() const { return r_[n_]; }

  double r(int i) const { return r_[i]; }
  double t(int i) const { return (i + 0.5) * h_; }
  double dr_dt(int i) const { return s_ * std::cosh(t(i)); }
  /// (r / r') at t_{i+1/2}; zero for i = -1.
  double metric_half(int i) const;

  double r_of_t(double t) const { return s_ * std::sinh(t); }
  double t_of_r(double r) const { return std::asinh(r / s_); }

  /// Weights w_i with sum_i w_i f(r_i) ~ int_0^R f(r) r dr, exact for cubics in r^2.
  const std::vector<double>& quad_weights() const { return w_; }

  /// Same t nodes with all radii multiplied by `factor`.
  RadialGrid scaled(double factor) const;
  std::string descriptor() const;

 private:
  double s_;
  double h_;
  int n_;
  std::vector<double> r_;
  std::vector<double> w_;
};

/// Polar tensor grid: radial nodes times n_theta angular nodes at (j + 1/2) 2pi/n_theta.
/// Node index k = i * n_theta + j. The outermost ring (i = n) is the boundary.
class DiskGrid {
 public:
  DiskGrid(RadialGrid radial, int n_theta);

  const RadialGrid& radial() const { return radial_; }
  int n_theta() const { return nt_; }
  int rings() const { return radial_.size(); }
  int size() const { return radial_.size() * nt_; }
  int interior_size() const { return radial_.interior() * nt_; }
  int index(int i, int j) const { return i * nt_ + j; }
  int ring_of(int k) const { return k / nt_; }
  int col_of(int k) const { return k % nt_; }
  bool is_boundary(int k) const { return ring_of(k) == radial_.interior(); }

  double dtheta() const { return dtheta_; }
  double theta(int j) const { return (j + 0.5) * dtheta_; }
  Point node(int k) const;
  const std::vector<Point>& nodes() const { return nodes_; }

  /// Quadrature weights; they sum to pi R^2.
  const Eigen::VectorXd& weights() const { return weights_; }
  double area() const;

  DiskGrid scaled(double factor) const;
  std::string descriptor() const;
  /// Stable 16 hex digit digest of the descriptor.
  std::string hash() const;

 private:
  RadialGrid radial_;
  int nt_;
  double dtheta_;
  std::vector<Point> nodes_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const DiskGrid>;

GridPtr make_disk_grid(double r_out, int n_radial, int n_theta, double scale = 1.0);

/// Interior ring count giving stretched-coordinate step close to `step` out to r_out (scale 1).
int rings_for_step(double r_out, double step);

/// One real value per node of a disk grid.
struct ScalarField {
  GridPtr grid;
  Eigen::VectorXd values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g);
  ScalarField(GridPtr g, Eigen::VectorXd v);

  static ScalarField sample(GridPtr g, const std::function<double(Point)>& fn);
  int size() const { return static_cast<int>(values.size()); }
  bool all_finite() const;
};

/// Rows for the interior nodes, columns for all nodes (boundary ring included).
SparseMatrix laplacian_matrix(const DiskGrid& g);

/// Discrete Laplacian at interior nodes; boundary ring entries are set to zero.
Eigen::VectorXd apply_laplacian(const DiskGrid& g, const Eigen::VectorXd& u);

/// Radial-only operator (1/r) d/dr (r d/dr) with the same stencil; rows 0..n-1, columns 0..n.
SparseMatrix radial_laplacian_matrix(const RadialGrid& g);
Eigen::VectorXd apply_radial_laplacian(const RadialGrid& g, const Eigen::VectorXd& u);

double integrate(const ScalarField& f);
double integrate(const DiskGrid& g, const Eigen::VectorXd& v);
/// Integral over the plane of a radial profile: 2 pi sum w_i f_i.
double integrate_radial(const RadialGrid& g, const Eigen::VectorXd& f);

double norm_L2(const DiskGrid& g, const Eigen::VectorXd& v);
double norm_Y(const ScalarField& h, const WeightParams& w);
double norm_Y(const DiskGrid& g, const Eigen::VectorXd& h, const WeightParams& w);
double norm_X(const ScalarField& v, const WeightParams& w);
double norm_X(const DiskGrid& g, const Eigen::VectorXd& v, const WeightParams& w);

/// Bilinear interpolation in (t, theta). Points beyond the boundary ring return `outside`.
double interpolate(const DiskGrid& g, const Eigen::VectorXd& v, Point x, double outside = 0.0);
/// Linear interpolation in t of a radial profile; beyond R returns `outside`.
double interpolate_radial(const RadialGrid& g, const Eigen::VectorXd& v, double r,
                          double outside = 0.0);

/// Upper bound for int_{|x|>R} C |x|^{-p} dx, p > 2.
double tail_bound(double c, double r_out, double power);
/// Smallest R with tail_bound(c, R, power) <= tol.
double select_r_out(double c, double power, double tol);

/// CSV with header comment naming the field and grid hash, then r,theta,value rows.
void write_field_csv(std::ostream& os, const ScalarField& f, std::string_view name);
void write_field_csv(std::ostream& os, const DiskGrid& g, const Eigen::VectorXd& v,
                     std::string_view name);

std::string fnv1a_hex(std::string_view text);

}  // namespace csvortex
