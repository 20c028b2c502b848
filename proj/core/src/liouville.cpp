#include "csvortex/liouville.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "csvortex/error.hpp"

namespace csvortex {

namespace {

void check_lambda(const Rational& lambda) {
  if (!(lambda.den == 1 || lambda.den == 2) || lambda.num < lambda.den) {
    throw ConfigError("lambda must be an integer or half-integer >= 1, got " + lambda.str());
  }
}

double log_prefactor(const LiouvilleProfile& p) {
  const double lam = p.lambda.value();
  return std::log(32.0 * lam * lam / ((4.0 - p.a * p.b) * (2.0 + p.b))) + p.mu;
}

}  // namespace

LiouvilleProfile::LiouvilleProfile(double mu_, std::complex<double> alpha_, Rational lambda_, int a_,
                                   int b_)
    : mu(mu_), alpha(alpha_), lambda(lambda_), a(a_), b(b_) {
  check_lambda(lambda);
  if (!is_admissible(a, b)) throw ConfigError("inadmissible Cartan pair in Liouville profile");
  if (!lambda.is_integer() && alpha != std::complex<double>{}) {
    throw ConfigError("alpha must vanish when lambda is not an integer");
  }
}

LiouvilleProfile LiouvilleProfile::for_model(const GaugeModel& m, std::complex<double> alpha) {
  return LiouvilleProfile(0.0, alpha, m.lambda(), m.a(), m.b());
}

std::complex<double> zpow(std::complex<double> z, const Rational& lambda) {
  if (lambda.is_integer()) {
    std::complex<double> out{1.0, 0.0};
    for (long k = 0; k < lambda.num; ++k) out *= z;
    return out;
  }
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  return std::polar(std::pow(r, lambda.value()), lambda.value() * std::arg(z));
}

double eval_W_star(const LiouvilleProfile& p, std::complex<double> z) {
  const double w2 = std::norm(zpow(z, p.lambda) + p.alpha);
  return log_prefactor(p) - 2.0 * std::log1p(std::exp(p.mu) * w2);
}

double eval_W(const LiouvilleProfile& p, std::complex<double> z) {
  const double lam = p.lambda.value();
  if (lam == 1.0) return eval_W_star(p, z);
  const double r = std::abs(z);
  if (r == 0.0) throw GridError("W is singular at the origin for lambda > 1");
  return eval_W_star(p, z) + (2.0 * lam - 2.0) * std::log(r);
}

double eval_expW(const LiouvilleProfile& p, std::complex<double> z) {
  const double lam = p.lambda.value();
  const double r = std::abs(z);
  const double ew = std::exp(eval_W_star(p, z));
  return lam == 1.0 ? ew : ew * std::pow(r, 2.0 * lam - 2.0);
}

double eval_weight(const LiouvilleProfile& p, std::complex<double> z) {
  return p.coefficient() * eval_expW(p, z);
}

std::complex<double> eval_grad_W(const LiouvilleProfile& p, std::complex<double> z) {
  const double lam = p.lambda.value();
  const double r2 = std::norm(z);
  if (r2 == 0.0 && lam != 1.0) throw GridError("grad W is singular at the origin");
  const std::complex<double> w = zpow(z, p.lambda) + p.alpha;
  const Rational lm1(p.lambda.num - p.lambda.den, p.lambda.den);
  const std::complex<double> q = std::conj(w) * lam * zpow(z, lm1);
  const double em = std::exp(p.mu);
  std::complex<double> g = -2.0 * em * 2.0 * std::conj(q) / (1.0 + em * std::norm(w));
  if (lam != 1.0) g += (2.0 * lam - 2.0) * z / r2;
  return g;
}

std::complex<double> eval_Z_complex(std::complex<double> alpha, const Rational& lambda,
                                    std::complex<double> z) {
  const std::complex<double> w = zpow(z, lambda) + alpha;
  return w / (1.0 + std::norm(w));
}

double eval_Z(std::complex<double> alpha, const Rational& lambda, int j, std::complex<double> z) {
  const std::complex<double> w = zpow(z, lambda) + alpha;
  const double n = std::norm(w);
  switch (j) {
    case 0: return (1.0 - n) / (1.0 + n);
    case 1: return w.real() / (1.0 + n);
    case 2: return w.imag() / (1.0 + n);
    default: throw ConfigError("kernel index must be 0, 1 or 2");
  }
}

ScalarField liouville_residual(const LiouvilleProfile& p, GridPtr grid, double r_min) {
  if (p.lambda.value() > 1.0 && !(r_min > 0.0)) {
    throw GridError("residual for lambda > 1 needs a neighbourhood of the origin excluded");
  }
  Eigen::VectorXd w(grid->size());
  for (int k = 0; k < grid->size(); ++k) w[k] = eval_W(p, grid->node(k));
  Eigen::VectorXd res = apply_laplacian(*grid, w);
  for (int k = 0; k < grid->size(); ++k) {
    if (grid->is_boundary(k) || std::abs(grid->node(k)) < r_min) {
      res[k] = 0.0;
    } else {
      res[k] += eval_weight(p, grid->node(k));
    }
  }
  return ScalarField(grid, std::move(res));
}

double liouville_mass(const LiouvilleProfile& p, const DiskGrid& grid) {
  Eigen::VectorXd v(grid.size());
  for (int k = 0; k < grid.size(); ++k) v[k] = eval_weight(p, grid.node(k));
  return integrate(grid, v);
}

namespace {

Eigen::VectorXd sigma_weight(const DiskGrid& g, const WeightParams& w) {
  Eigen::VectorXd s(g.size());
  for (int k = 0; k < g.size(); ++k) s[k] = std::pow(sigma(g.node(k)), -2.0 - 2.0 * w.d);
  return s;
}

Eigen::VectorXd sample_Z(std::complex<double> alpha, const Rational& lambda, int j,
                         const DiskGrid& g) {
  Eigen::VectorXd z(g.size());
  for (int k = 0; k < g.size(); ++k) z[k] = eval_Z(alpha, lambda, j, g.node(k));
  return z;
}

}  // namespace

Eigen::Matrix2d gram_matrix(std::complex<double> alpha, const Rational& lambda, const DiskGrid& grid,
                            const WeightParams& w) {
  w.validate();
  if (!lambda.is_integer()) throw ConfigError("Gram system is only defined for integer lambda");
  const Eigen::VectorXd s = sigma_weight(grid, w);
  const Eigen::VectorXd z1 = sample_Z(alpha, lambda, 1, grid);
  const Eigen::VectorXd z2 = sample_Z(alpha, lambda, 2, grid);
  Eigen::Matrix2d a;
  a(0, 0) = integrate(grid, s.cwiseProduct(z1).cwiseProduct(z1));
  a(0, 1) = integrate(grid, s.cwiseProduct(z1).cwiseProduct(z2));
  a(1, 0) = a(0, 1);
  a(1, 1) = integrate(grid, s.cwiseProduct(z2).cwiseProduct(z2));
  return a;
}

ProjectorT::ProjectorT(std::complex<double> alpha, Rational lambda, GridPtr grid, WeightParams w)
    : identity_(!lambda.is_integer()), grid_(std::move(grid)) {
  w.validate();
  if (identity_) return;
  const Eigen::VectorXd s = sigma_weight(*grid_, w);
  z1_ = sample_Z(alpha, lambda, 1, *grid_);
  z2_ = sample_Z(alpha, lambda, 2, *grid_);
  wz1_ = s.cwiseProduct(z1_);
  wz2_ = s.cwiseProduct(z2_);
  gram_ = gram_matrix(alpha, lambda, *grid_, w);
  const double a0 = gram_matrix({0.0, 0.0}, lambda, *grid_, w)(0, 0);
  if (gram_.determinant() < 1e-6 * a0 * a0) {
    throw LinearSolveError("Gram matrix numerically singular for |alpha| = " +
                           std::to_string(std::abs(alpha)));
  }
}

Projection ProjectorT::apply(const Eigen::VectorXd& h) const {
  if (h.size() != grid_->size()) throw GridError("field size does not match projector grid");
  if (identity_) return {h, 0.0, 0.0};
  const Eigen::Vector2d rhs(integrate(*grid_, h.cwiseProduct(z1_)),
                            integrate(*grid_, h.cwiseProduct(z2_)));
  const Eigen::Vector2d c = gram_.partialPivLu().solve(rhs);
  return {h - c[0] * wz1_ - c[1] * wz2_, c[0], c[1]};
}

Projection project_T(std::complex<double> alpha, const Rational& lambda, const ScalarField& h,
                     const WeightParams& w) {
  return ProjectorT(alpha, lambda, h.grid, w).apply(h.values);
}

double kernel_annihilation_check(std::complex<double> alpha, const Rational& lambda, int j,
                                 GridPtr grid, const WeightParams& w) {
  check_lambda(lambda);
  if (j < 0 || j > 2) throw ConfigError("kernel index must be 0, 1 or 2");
  if (j > 0 && !lambda.is_integer()) {
    throw ConfigError("Z_1, Z_2 are kernel elements only for integer lambda");
  }
  const Eigen::VectorXd z = sample_Z(alpha, lambda, j, *grid);
  Eigen::VectorXd res = apply_laplacian(*grid, z);
  const LiouvilleProfile prof(0.0, alpha, lambda, 1, 1);
  for (int k = 0; k < grid->size(); ++k) {
    if (!grid->is_boundary(k)) res[k] += eval_weight(prof, grid->node(k)) * z[k];
  }
  return norm_Y(*grid, res, w);
}

}  // namespace csvortex
