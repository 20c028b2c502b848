#include "csvortex/grid.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "csvortex/error.hpp"

namespace csvortex {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void WeightParams::validate() const {
  if (!(d > 0.0 && d < 0.25)) throw ConfigError("weight exponent d must lie in (0, 1/4)");
}

double sigma(Point x) { return 1.0 + std::abs(x); }

RadialGrid::RadialGrid(double r_out, int n_interior, double scale) : s_(scale), n_(n_interior) {
  if (!(r_out > 0.0) || !(scale > 0.0)) throw GridError("radial grid needs R > 0 and scale > 0");
  if (n_interior < 3) throw GridError("radial grid needs at least 3 interior nodes");
  h_ = std::asinh(r_out / s_) / (n_ + 0.5);
  r_.resize(n_ + 1);
  for (int i = 0; i < n_; ++i) r_[i] = s_ * std::sinh((i + 0.5) * h_);
  r_[n_] = r_out;

  // Composite rule in s = r^2 (so that r dr = ds / 2): on each panel the integrand is
  // replaced by the cubic through four neighbouring nodes, integrated exactly with 2-point
  // Gauss-Legendre. The panel [0, s_0] uses nodes 0..3 by extrapolation.
  w_.assign(n_ + 1, 0.0);
  std::vector<double> sv(n_ + 1);
  for (int i = 0; i <= n_; ++i) sv[i] = r_[i] * r_[i];
  const double g = 0.5 / std::sqrt(3.0);
  for (int panel = -1; panel < n_; ++panel) {
    const double lo = panel < 0 ? 0.0 : sv[panel];
    const double hi = sv[panel + 1];
    const int start = std::clamp(panel - 1, 0, n_ - 3);
    const double mid = 0.5 * (lo + hi), len = hi - lo;
    for (double x : {mid - g * len, mid + g * len}) {
      for (int a = start; a < start + 4; ++a) {
        double l = 1.0;
        for (int c = start; c < start + 4; ++c) {
          if (c != a) l *= (x - sv[c]) / (sv[a] - sv[c]);
        }
        w_[a] += 0.5 * len * l;
      }
    }
  }
  for (double& w : w_) w *= 0.5;
}

double RadialGrid::metric_half(int i) const {
  if (i < 0) return 0.0;
  return std::tanh((i + 1) * h_);
}

RadialGrid RadialGrid::scaled(double factor) const {
  return RadialGrid(r_out() * factor, n_, s_ * factor);
}

std::string RadialGrid::descriptor() const {
  return "radial:sinh;R=" + fmt17(r_out()) + ";n=" + std::to_string(n_) + ";s=" + fmt17(s_);
}

DiskGrid::DiskGrid(RadialGrid radial, int n_theta) : radial_(std::move(radial)), nt_(n_theta) {
  if (n_theta < 8 || n_theta % 2 != 0) throw GridError("angular node count must be even and >= 8");
  dtheta_ = 2.0 * std::numbers::pi / nt_;
  nodes_.resize(size());
  weights_.resize(size());
  const auto& wr = radial_.quad_weights();
  for (int i = 0; i < rings(); ++i) {
    for (int j = 0; j < nt_; ++j) {
      const int k = index(i, j);
      nodes_[k] = std::polar(radial_.r(i), theta(j));
      weights_[k] = wr[i] * dtheta_;
    }
  }
}

Point DiskGrid::node(int k) const { return nodes_[k]; }

double DiskGrid::area() const { return std::numbers::pi * radial_.r_out() * radial_.r_out(); }

DiskGrid DiskGrid::scaled(double factor) const { return DiskGrid(radial_.scaled(factor), nt_); }

std::string DiskGrid::descriptor() const {
  return "disk;" + radial_.descriptor() + ";ntheta=" + std::to_string(nt_);
}

std::string DiskGrid::hash() const { return fnv1a_hex(descriptor()); }

GridPtr make_disk_grid(double r_out, int n_radial, int n_theta, double scale) {
  return std::make_shared<const DiskGrid>(RadialGrid(r_out, n_radial, scale), n_theta);
}

ScalarField::ScalarField(GridPtr g) : grid(std::move(g)), values(Eigen::VectorXd::Zero(grid->size())) {}

ScalarField::ScalarField(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw GridError("field size does not match grid node count");
}

ScalarField ScalarField::sample(GridPtr g, const std::function<double(Point)>& fn) {
  ScalarField f(g);
  for (int k = 0; k < g->size(); ++k) f.values[k] = fn(g->node(k));
  return f;
}

bool ScalarField::all_finite() const { return values.allFinite(); }

SparseMatrix laplacian_matrix(const DiskGrid& g) {
  const auto& rg = g.radial();
  const int n = rg.interior();
  const int nt = g.n_theta();
  const double h2 = rg.h() * rg.h();
  const double dt2 = g.dtheta() * g.dtheta();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(g.interior_size()) * 5);
  for (int i = 0; i < n; ++i) {
    const double jac = rg.r(i) * rg.dr_dt(i) * h2;
    const double mp = rg.metric_half(i) / jac;
    const double mm = rg.metric_half(i - 1) / jac;
    const double ang = 1.0 / (rg.r(i) * rg.r(i) * dt2);
    for (int j = 0; j < nt; ++j) {
      const int k = g.index(i, j);
      trip.emplace_back(k, k, -mp - mm - 2.0 * ang);
      trip.emplace_back(k, g.index(i + 1, j), mp);
      if (i > 0) trip.emplace_back(k, g.index(i - 1, j), mm);
      trip.emplace_back(k, g.index(i, (j + 1) % nt), ang);
      trip.emplace_back(k, g.index(i, (j + nt - 1) % nt), ang);
    }
  }
  SparseMatrix m(g.interior_size(), g.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::VectorXd apply_laplacian(const DiskGrid& g, const Eigen::VectorXd& u) {
  if (u.size() != g.size()) throw GridError("field size does not match grid");
  const auto& rg = g.radial();
  const int n = rg.interior();
  const int nt = g.n_theta();
  const double h2 = rg.h() * rg.h();
  const double dt2 = g.dtheta() * g.dtheta();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (int i = 0; i < n; ++i) {
    const double jac = rg.r(i) * rg.dr_dt(i) * h2;
    const double mp = rg.metric_half(i) / jac;
    const double mm = rg.metric_half(i - 1) / jac;
    const double ang = 1.0 / (rg.r(i) * rg.r(i) * dt2);
    for (int j = 0; j < nt; ++j) {
      const int k = g.index(i, j);
      const double uc = u[k];
      double acc = mp * (u[g.index(i + 1, j)] - uc);
      if (i > 0) acc -= mm * (uc - u[g.index(i - 1, j)]);
      acc += ang * (u[g.index(i, (j + 1) % nt)] - 2.0 * uc + u[g.index(i, (j + nt - 1) % nt)]);
      out[k] = acc;
    }
  }
  return out;
}

SparseMatrix radial_laplacian_matrix(const RadialGrid& g) {
  const int n = g.interior();
  const double h2 = g.h() * g.h();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(n) * 3);
  for (int i = 0; i < n; ++i) {
    const double jac = g.r(i) * g.dr_dt(i) * h2;
    const double mp = g.metric_half(i) / jac;
    const double mm = g.metric_half(i - 1) / jac;
    trip.emplace_back(i, i, -mp - mm);
    trip.emplace_back(i, i + 1, mp);
    if (i > 0) trip.emplace_back(i, i - 1, mm);
  }
  SparseMatrix m(n, n + 1);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::VectorXd apply_radial_laplacian(const RadialGrid& g, const Eigen::VectorXd& u) {
  if (u.size() != g.size()) throw GridError("profile size does not match radial grid");
  const int n = g.interior();
  const double h2 = g.h() * g.h();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (int i = 0; i < n; ++i) {
    const double jac = g.r(i) * g.dr_dt(i) * h2;
    double acc = g.metric_half(i) * (u[i + 1] - u[i]);
    if (i > 0) acc -= g.metric_half(i - 1) * (u[i] - u[i - 1]);
    out[i] = acc / jac;
  }
  return out;
}

namespace {

/// Pairwise summation keeps reductions deterministic and accurate.
double pairwise_sum(const double* x, long n) {
  if (n <= 16) {
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const long m = n / 2;
  return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

double weighted_sum(const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  Eigen::VectorXd prod = w.cwiseProduct(v);
  return pairwise_sum(prod.data(), prod.size());
}

void require_finite(const Eigen::VectorXd& v) {
  if (!v.allFinite()) throw GridError("field contains non-finite values");
}

}  // namespace

double integrate(const DiskGrid& g, const Eigen::VectorXd& v) {
  if (v.size() != g.size()) throw GridError("field size does not match grid");
  return weighted_sum(g.weights(), v);
}

double integrate(const ScalarField& f) { return integrate(*f.grid, f.values); }

double integrate_radial(const RadialGrid& g, const Eigen::VectorXd& f) {
  if (f.size() != g.size()) throw GridError("profile size does not match radial grid");
  Eigen::Map<const Eigen::VectorXd> w(g.quad_weights().data(), g.size());
  return 2.0 * std::numbers::pi * weighted_sum(w, f);
}

double norm_L2(const DiskGrid& g, const Eigen::VectorXd& v) {
  require_finite(v);
  return std::sqrt(integrate(g, v.cwiseAbs2()));
}

double norm_Y(const DiskGrid& g, const Eigen::VectorXd& h, const WeightParams& w) {
  w.validate();
  require_finite(h);
  Eigen::VectorXd sq(g.size());
  for (int k = 0; k < g.size(); ++k) sq[k] = std::pow(sigma(g.node(k)), 2.0 + 2.0 * w.d) * h[k] * h[k];
  return std::sqrt(integrate(g, sq));
}

double norm_Y(const ScalarField& h, const WeightParams& w) { return norm_Y(*h.grid, h.values, w); }

double norm_X(const DiskGrid& g, const Eigen::VectorXd& v, const WeightParams& w) {
  w.validate();
  require_finite(v);
  if (g.radial().interior() < 3) throw GridError("grid too coarse for the Laplacian");
  const Eigen::VectorXd lap = apply_laplacian(g, v);
  Eigen::VectorXd sq(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const double s = sigma(g.node(k));
    const double a = g.is_boundary(k) ? 0.0 : std::pow(s, 2.0 + 2.0 * w.d) * lap[k] * lap[k];
    sq[k] = a + std::pow(s, -2.0 - 2.0 * w.d) * v[k] * v[k];
  }
  return std::sqrt(integrate(g, sq));
}

double norm_X(const ScalarField& v, const WeightParams& w) { return norm_X(*v.grid, v.values, w); }

double interpolate(const DiskGrid& g, const Eigen::VectorXd& v, Point x, double outside) {
  const auto& rg = g.radial();
  const double r = std::abs(x);
  if (r > rg.r_out() * (1.0 + 1e-14)) return outside;
  const int nt = g.n_theta();
  double th = std::arg(x);
  if (th < 0) th += 2.0 * std::numbers::pi;

  auto ring_value = [&](int i, double angle) {
    double u = angle / g.dtheta() - 0.5;
    double j0 = std::floor(u);
    const double fj = u - j0;
    int a = static_cast<int>(j0) % nt;
    if (a < 0) a += nt;
    const int b = (a + 1) % nt;
    return (1.0 - fj) * v[g.index(i, a)] + fj * v[g.index(i, b)];
  };

  const double ti = rg.t_of_r(r) / rg.h() - 0.5;
  if (ti < 0.0) {
    // Between the mirror node at t = -t_0 (angle + pi) and the first ring.
    const double fr = ti + 1.0;
    return (1.0 - fr) * ring_value(0, th + std::numbers::pi) + fr * ring_value(0, th);
  }
  int i0 = static_cast<int>(std::floor(ti));
  if (i0 >= rg.interior()) i0 = rg.interior() - 1;
  // The boundary node is at t_n = (n + 1/2) h, so index arithmetic stays uniform.
  const double fr = std::min(1.0, ti - i0);
  return (1.0 - fr) * ring_value(i0, th) + fr * ring_value(i0 + 1, th);
}

double interpolate_radial(const RadialGrid& g, const Eigen::VectorXd& v, double r, double outside) {
  r = std::abs(r);
  if (r > g.r_out() * (1.0 + 1e-14)) return outside;
  const double ti = g.t_of_r(r) / g.h() - 0.5;
  if (ti < 0.0) return v[0];
  int i0 = static_cast<int>(std::floor(ti));
  if (i0 >= g.interior()) i0 = g.interior() - 1;
  const double fr = std::min(1.0, ti - i0);
  return (1.0 - fr) * v[i0] + fr * v[i0 + 1];
}

int rings_for_step(double r_out, double step) {
  if (!(r_out > 0.0) || !(step > 0.0)) throw ConfigError("radius and step must be positive");
  return std::max(3, static_cast<int>(std::ceil(std::asinh(r_out) / step - 0.5)));
}

double tail_bound(double c, double r_out, double power) {
  if (!(power > 2.0)) throw ConfigError("tail bound needs decay faster than |x|^-2");
  return 2.0 * std::numbers::pi * c * std::pow(r_out, 2.0 - power) / (power - 2.0);
}

double select_r_out(double c, double power, double tol) {
  if (!(tol > 0.0)) throw ConfigError("tail tolerance must be positive");
  const double r = std::pow(2.0 * std::numbers::pi * c / ((power - 2.0) * tol), 1.0 / (power - 2.0));
  return std::max(r, 1.0);
}

void write_field_csv(std::ostream& os, const DiskGrid& g, const Eigen::VectorXd& v,
                     std::string_view name) {
  char buf[96];
  os << "# field=" << name << " grid=" << g.hash() << "\n";
  os << "r,theta,value\n";
  for (int k = 0; k < g.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.radial().r(g.ring_of(k)),
                  g.theta(g.col_of(k)), v[k]);
    os << buf;
  }
}

void write_field_csv(std::ostream& os, const ScalarField& f, std::string_view name) {
  write_field_csv(os, *f.grid, f.values, name);
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace csvortex
