#include "csvortex/radial.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "csvortex/error.hpp"
#include "csvortex/linear.hpp"
#include "csvortex/liouville.hpp"

namespace csvortex {

namespace {

double em1mx(double d) {
  if (std::abs(d) < 1e-2) {
    const double d2 = d * d;
    return d2 * (0.5 + d * (1.0 / 6.0 + d * (1.0 / 24.0 + d * (1.0 / 120.0 + d / 720.0))));
  }
  return std::expm1(d) - d;
}

Eigen::VectorXd sample_W0(int a, int b, const RadialGrid& yg) {
  const LiouvilleProfile prof(0.0, 0.0, Rational(1), a, b);
  Eigen::VectorXd w(yg.size());
  for (int i = 0; i < yg.size(); ++i) w[i] = eval_W(prof, yg.r(i));
  return w;
}

double radial_norm(const RadialGrid& g, const Eigen::VectorXd& f) {
  return std::sqrt(integrate_radial(g, f.cwiseAbs2()));
}

// Norms take the Laplacian as an argument: inside the iteration it comes from the equation
// (Delta xi = h1 + xi, Delta eta = h2 - k e^W eta), which avoids differencing round-off on
// the finest cells.
double radial_H2(const RadialGrid& g, const Eigen::VectorXd& f, const Eigen::VectorXd& lap) {
  const double a = radial_norm(g, f);
  const double l = radial_norm(g, lap);
  return std::sqrt(a * a + l * l);
}

double radial_X(const RadialGrid& g, const Eigen::VectorXd& v, const Eigen::VectorXd& lap,
                const WeightParams& w) {
  Eigen::VectorXd dens(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double s = 1.0 + g.r(i);
    const double up = std::pow(s, 2.0 + 2.0 * w.d);
    dens[i] = (i < g.interior() ? up * lap[i] * lap[i] : 0.0) + v[i] * v[i] / up;
  }
  return std::sqrt(integrate_radial(g, dens));
}

}  // namespace

Eigen::VectorXd lambda1_h1(int a, int b, double eps, const RadialGrid& ygrid,
                           const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) {
  const Eigen::VectorXd W = sample_W0(a, b, ygrid);
  Eigen::VectorXd h(ygrid.size());
  for (int i = 0; i < ygrid.size(); ++i) {
    const double d = eps * xi[i];
    const double e = eps * eta[i];
    h[i] = (em1mx(2.0 * d) - em1mx(d)) / eps + a * eps * std::exp(W[i] - 0.5 * b * d + e) +
           0.5 * a * (b - 2.0) * eps * std::exp(W[i] + 0.5 * (2.0 - b) * d + e) -
           2.0 * a * eps * eps * eps * std::exp(2.0 * W[i] - b * d + 2.0 * e);
  }
  return h;
}

Eigen::VectorXd lambda1_h2(int a, int b, double eps, const RadialGrid& ygrid,
                           const Eigen::VectorXd& xi, const Eigen::VectorXd& eta) {
  const Eigen::VectorXd W = sample_W0(a, b, ygrid);
  const double c = a * b - 4.0;
  Eigen::VectorXd h(ygrid.size());
  for (int i = 0; i < ygrid.size(); ++i) {
    const double d = eps * xi[i];
    const double e = eps * eta[i];
    const double ew = std::exp(W[i]);
    h[i] = c / (2.0 * eps) * ew * (std::expm1(-0.5 * b * d + e) - e) +
           b * c / (4.0 * eps) * ew * (std::expm1(0.5 * (2.0 - b) * d + e) - e) -
           c * eps * std::exp(2.0 * W[i] - b * d + 2.0 * e);
  }
  return h;
}

double Lambda1Solution::eval_u1(double r) const {
  return interpolate_radial(xgrid, u1, r, -std::numbers::ln2);
}

double Lambda1Solution::eval_u2(double r) const {
  if (r > xgrid.r_out()) throw GridError("radius beyond the radial grid");
  return interpolate_radial(xgrid, u2, r);
}

Lambda1Solution solve_lambda1(int a, int b, double eps, const Lambda1Options& opt) {
  if (!is_admissible(a, b)) throw ConfigError("inadmissible Cartan pair");
  if (!(eps > 0.0) || eps >= 1.0) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(opt.radial_step > 0.0)) throw ConfigError("radial step must be positive");
  if (!(opt.beta_fit_hi > opt.beta_fit_lo) || opt.beta_fit_hi > opt.r_out_y) {
    throw ConfigError("beta fit window must lie inside the grid");
  }
  opt.weight.validate();

  const double r_out_x = opt.r_out_y / eps;
  const int n = std::max(3, static_cast<int>(std::ceil(std::asinh(r_out_x) / opt.radial_step - 0.5)));
  Lambda1Solution s(a, b, eps, RadialGrid(r_out_x, n), RadialGrid(r_out_x, n).scaled(eps));
  const RadialGrid& xg = s.xgrid;
  const RadialGrid& yg = s.ygrid;
  const int M = xg.size();

  const SparseSolver l1(dirichlet_operator_radial(xg, Eigen::VectorXd::Constant(M, -1.0)));

  const Eigen::VectorXd W = sample_W0(a, b, yg);
  const double kc = 0.25 * (4.0 - a * b) * (2.0 + b);
  // L2 on E_0^r: the Dirichlet problem (value tau at R) is regular because Z_00 tends to -1,
  // so eta = y + tau z with z the homogeneous solution and tau fixed by the constraint.
  Eigen::VectorXd pot(M);
  for (int i = 0; i < M; ++i) pot[i] = kc * std::exp(W[i]);
  const SparseSolver l2(dirichlet_operator_radial(yg, pot));
  Eigen::VectorXd cw(M);
  const auto& wq = yg.quad_weights();
  for (int i = 0; i < M; ++i) {
    const double y2 = yg.r(i) * yg.r(i);
    cw[i] = wq[i] * std::exp(W[i]) * (1.0 - y2) / (1.0 + y2);
  }
  Eigen::VectorXd en = Eigen::VectorXd::Zero(M);
  en[n] = 1.0;
  const Eigen::VectorXd zh = l2.solve(en);
  const double cz = cw.dot(zh);
  if (std::abs(cz) < 1e-14 * cw.cwiseAbs().sum()) {
    throw LinearSolveError("constraint is degenerate on the homogeneous L2 solution");
  }
  auto solve_l2 = [&](const Eigen::VectorXd& rhs) {
    const Eigen::VectorXd y = l2.solve(rhs);
    return Eigen::VectorXd(y - (cw.dot(y) / cz) * zh);
  };

  s.xi = Eigen::VectorXd::Zero(M);
  s.eta = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd lap_xi = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd lap_eta = Eigen::VectorXd::Zero(M);
  for (int it = 1; it <= opt.max_picard; ++it) {
    Eigen::VectorXd h1 = lambda1_h1(a, b, eps, yg, s.xi, s.eta);
    Eigen::VectorXd h2 = lambda1_h2(a, b, eps, yg, s.xi, s.eta);
    h1[n] = 0.0;
    h2[n] = 0.0;
    const Eigen::VectorXd xi = l1.solve(h1);
    const Eigen::VectorXd eta = solve_l2(h2);
    Eigen::VectorXd lx = h1 + xi;
    Eigen::VectorXd le = h2 - pot.cwiseProduct(eta);
    lx[n] = 0.0;
    le[n] = 0.0;
    const double diff = radial_H2(xg, xi - s.xi, lx - lap_xi) +
                        radial_X(yg, eta - s.eta, le - lap_eta, opt.weight);
    s.xi = xi;
    s.eta = eta;
    lap_xi = std::move(lx);
    lap_eta = std::move(le);
    s.differences.push_back(diff);
    s.iterations = it;
    if (diff <= opt.picard_tol) {
      s.converged = true;
      break;
    }
    if (!std::isfinite(diff)) break;
  }
  const auto& dv = s.differences;
  if (dv.size() >= 3 && dv[dv.size() - 3] > 0.0) {
    s.contraction_ratio = std::sqrt(dv.back() / dv[dv.size() - 3]);
  }
  s.xi_norm = radial_H2(xg, s.xi, lap_xi);
  s.eta_norm = radial_X(yg, s.eta, lap_eta, opt.weight);
  Eigen::VectorXd h1 = lambda1_h1(a, b, eps, yg, s.xi, s.eta);
  h1[n] = 0.0;
  s.h1_norm = radial_norm(xg, h1);
  s.log_coefficient = std::tanh(yg.t(n)) *
                      (3.0 * s.eta[n] - 4.0 * s.eta[n - 1] + s.eta[n - 2]) / (2.0 * yg.h());

  const double le = 2.0 * std::log(eps);
  s.u1 = (-std::numbers::ln2 + eps * s.xi.array()).matrix();
  s.u2 = (W.array() + le - 0.5 * b * eps * s.xi.array() + eps * s.eta.array()).matrix();
  s.sup_u1_deviation = eps * s.xi.cwiseAbs().maxCoeff();

  const Eigen::VectorXd lxi = apply_radial_laplacian(xg, s.xi);
  const Eigen::VectorXd leta = apply_radial_laplacian(yg, s.eta);
  for (int i = 0; i < n; ++i) {
    const double lu1 = eps * lxi[i];
    const double lu2 = -eps * eps * kc * std::exp(W[i]) - 0.5 * b * eps * lxi[i] +
                       eps * eps * eps * leta[i];
    const double e1 = std::exp(s.u1[i]), e2 = std::exp(s.u2[i]), e12 = e1 * e2;
    const double r1 = lu1 + 2.0 * e1 - a * e2 - 4.0 * e1 * e1 + 2.0 * a * e2 * e2 - a * (b - 2.0) * e12;
    const double r2 = lu2 + 2.0 * e2 - b * e1 - 4.0 * e2 * e2 + 2.0 * b * e1 * e1 - b * (a - 2.0) * e12;
    s.residual_eq1 = std::max(s.residual_eq1, std::abs(r1));
    s.residual_eq2 = std::max(s.residual_eq2, std::abs(r2));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = 0; i < M; ++i) {
    if (yg.r(i) < opt.beta_fit_lo || yg.r(i) > opt.beta_fit_hi) continue;
    const double lr = std::log(xg.r(i));
    sx += lr;
    sy += s.u2[i];
    sxx += lr * lr;
    sxy += lr * s.u2[i];
    ++cnt;
  }
  if (cnt < 2) throw GridError("no nodes inside the beta fit window");
  s.beta = -0.5 * (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return s;
}

}  // namespace csvortex
