#include "csvortex/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "csvortex/error.hpp"
#include "csvortex/radial.hpp"

namespace csvortex {

namespace {

// e^d - 1 - d without cancellation for small d.
double em1mx(double d) {
  if (std::abs(d) < 1e-2) {
    const double d2 = d * d;
    return d2 * (0.5 + d * (1.0 / 6.0 + d * (1.0 / 24.0 + d * (1.0 / 120.0 + d / 720.0))));
  }
  return std::expm1(d) - d;
}

// e^{w + r} - e^w given w and the combined exponent wr = w + r.
double shifted_diff(double w, double r, double wr) {
  if (std::abs(r) < 1.0) return std::exp(w) * std::expm1(r);
  return std::exp(wr) - std::exp(w);
}

double h2_norm(const DiskGrid& g, const Eigen::VectorXd& f, const Eigen::VectorXd& lap) {
  const double a = norm_L2(g, f);
  const double l = norm_L2(g, lap);
  return std::sqrt(a * a + l * l);
}

double x_norm(const DiskGrid& g, const Eigen::VectorXd& v, const Eigen::VectorXd& lap,
              const WeightParams& w) {
  Eigen::VectorXd dens(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const double up = std::pow(sigma(g.node(k)), 2.0 + 2.0 * w.d);
    dens[k] = (g.is_boundary(k) ? 0.0 : up * lap[k] * lap[k]) + v[k] * v[k] / up;
  }
  return std::sqrt(integrate(g, dens));
}

}  // namespace

TwoScaleGrids make_two_scale_grids(double eps, const MixedGridOptions& opt) {
  if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(opt.radial_step > 0.0)) throw ConfigError("radial step must be positive");
  if (!(opt.r_out_y > 2.0)) throw ConfigError("r_out_y must exceed 2");
  const double r_out_x = opt.r_out_y / eps;
  const int n = rings_for_step(r_out_x, opt.radial_step);
  auto x = std::make_shared<const DiskGrid>(RadialGrid(r_out_x, n, 1.0), opt.n_theta);
  auto y = std::make_shared<const DiskGrid>(x->scaled(eps));
  return {x, y};
}

// ---------------------------------------------------------------------------------------------
// L1

L1Solver::L1Solver(const TopologicalSolution& topo) : grid_(topo.grid) {
  potential_.resize(grid_->size());
  for (int k = 0; k < grid_->size(); ++k) potential_[k] = f_prime(topo.U[k]);
  lu_ = std::make_unique<SparseSolver>(dirichlet_operator(*grid_, potential_));
}

Eigen::VectorXd L1Solver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd b = rhs;
  for (int k = grid_->interior_size(); k < grid_->size(); ++k) b[k] = 0.0;
  return lu_->solve(b);
}

Eigen::VectorXd L1Solver::apply(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = apply_laplacian(*grid_, u);
  for (int k = 0; k < grid_->interior_size(); ++k) out[k] += potential_[k] * u[k];
  return out;
}

ScalarField solve_L1(const TopologicalSolution& topo, const ScalarField& rhs) {
  if (rhs.grid.get() != topo.grid.get() && rhs.grid->hash() != topo.grid->hash()) {
    throw GridError("right-hand side lives on a different grid than the topological solution");
  }
  L1Solver l1(topo);
  return ScalarField(topo.grid, l1.solve(rhs.values));
}

// ---------------------------------------------------------------------------------------------
// L2

L2Solver::L2Solver(std::complex<double> alpha, Rational lambda, GridPtr ygrid, WeightParams w,
                   double consistency_tol)
    : grid_(std::move(ygrid)), lambda_(lambda), w_(w), tol_(consistency_tol) {
  w_.validate();
  const DiskGrid& g = *grid_;
  const RadialGrid& rg = g.radial();
  const int N = g.size();
  const int Ni = g.interior_size();
  const int nt = g.n_theta();
  const int n = rg.interior();
  if (n < 3) throw GridError("L2 solver needs at least three interior rings");

  // alpha is carried into W; non-integer lambda has no Z1, Z2 kernel and alpha must vanish.
  LiouvilleProfile prof(0.0, alpha, lambda, 1, 1);
  n_constraints_ = lambda.is_integer() ? 3 : 1;
  n_multipliers_ = lambda.is_integer() ? 2 : 0;
  pot_.resize(N);
  ewz_.assign(n_constraints_, Eigen::VectorXd(N));
  Eigen::VectorXd ew(N);
  for (int k = 0; k < N; ++k) {
    // the (a,b) dependence of W is a constant factor: k e^W = 8 lambda^2 |z|^{2l-2}/(1+|w|^2)^2
    const Point z = g.node(k);
    ew[k] = eval_expW(prof, z);
    pot_[k] = prof.coefficient() * ew[k];
    for (int i = 0; i < n_constraints_; ++i) ewz_[i][k] = ew[k] * eval_Z(alpha, lambda, i, z);
  }

  const int M = N + 1 + n_multipliers_;
  std::vector<Triplet> trip;
  const SparseMatrix lap = laplacian_matrix(g);
  trip.reserve(lap.nonZeros() + static_cast<size_t>(nt) * nt + 4L * N);
  for (int col = 0; col < lap.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(lap, col); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int k = 0; k < Ni; ++k) {
    trip.emplace_back(k, k, pot_[k]);
    for (int i = 0; i < n_multipliers_; ++i) trip.emplace_back(k, N + 1 + i, ewz_[i + 1][k]);
  }

  // Ring rows: (r/r') (3 e_n - 4 e_{n-1} + e_{n-2}) / 2h + DtN e_n - c = 0.
  const double rr = rg.r(n) / rg.dr_dt(n) / (2.0 * rg.h());
  std::vector<double> dtn(nt, 0.0);
  for (int d = 0; d < nt; ++d) {
    double s = 0.0;
    for (int m = -nt / 2 + 1; m <= nt / 2; ++m) s += std::abs(m) * std::cos(m * d * g.dtheta());
    dtn[d] = s / nt;
  }
  for (int j = 0; j < nt; ++j) {
    const int row = g.index(n, j);
    trip.emplace_back(row, g.index(n, j), 3.0 * rr);
    trip.emplace_back(row, g.index(n - 1, j), -4.0 * rr);
    trip.emplace_back(row, g.index(n - 2, j), rr);
    for (int jj = 0; jj < nt; ++jj) trip.emplace_back(row, g.index(n, jj), dtn[(j - jj + nt) % nt]);
    trip.emplace_back(row, N, -1.0);
  }

  // Constraint rows: int eta e^W Z_i = 0.
  const Eigen::VectorXd& wq = g.weights();
  for (int i = 0; i < n_constraints_; ++i) {
    for (int k = 0; k < N; ++k) {
      const double v = wq[k] * ewz_[i][k];
      if (v != 0.0) trip.emplace_back(N + i, k, v);
    }
  }
  // Without multipliers the system has N+1 rows from N + n_constraints; add none.
  SparseMatrix a(M, M);
  a.setFromTriplets(trip.begin(), trip.end());
  lu_ = std::make_unique<SparseSolver>(std::move(a), 1e-10, true);
}

L2Result L2Solver::solve(const Eigen::VectorXd& rhs) const {
  const DiskGrid& g = *grid_;
  const int N = g.size();
  const int Ni = g.interior_size();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(lu_->size());
  b.head(Ni) = rhs.head(Ni);
  const Eigen::VectorXd x = lu_->solve(b);

  L2Result out;
  out.eta = x.head(N);
  out.log_coefficient = x[N];
  if (n_multipliers_ == 2) {
    out.mu1 = x[N + 1];
    out.mu2 = x[N + 2];
    const Eigen::VectorXd m = out.mu1 * ewz_[1] + out.mu2 * ewz_[2];
    Eigen::VectorXd r = rhs;
    for (int k = Ni; k < N; ++k) r[k] = 0.0;
    const double rn = norm_Y(g, r, w_);
    out.inconsistency = rn > 0.0 ? norm_Y(g, m, w_) / rn : 0.0;
    out.consistent = out.inconsistency <= tol_;
  }
  const double en = std::sqrt(integrate(g, out.eta.cwiseAbs2()));
  for (int i = 0; i < n_constraints_; ++i) {
    const double c = std::abs(integrate(g, out.eta.cwiseProduct(ewz_[i])));
    out.constraint_defect = std::max(out.constraint_defect, en > 0.0 ? c / en : c);
  }
  return out;
}

Eigen::VectorXd L2Solver::laplacian(const L2Result& sol, const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid_->size());
  for (int k = 0; k < grid_->interior_size(); ++k) {
    out[k] = rhs[k] - pot_[k] * sol.eta[k];
    if (n_multipliers_ == 2) out[k] -= sol.mu1 * ewz_[1][k] + sol.mu2 * ewz_[2][k];
  }
  return out;
}

Eigen::VectorXd L2Solver::apply(const Eigen::VectorXd& eta) const {
  Eigen::VectorXd out = apply_laplacian(*grid_, eta);
  for (int k = 0; k < grid_->interior_size(); ++k) out[k] += pot_[k] * eta[k];
  return out;
}

L2Result solve_L2(std::complex<double> alpha, const Rational& lambda, const ScalarField& rhs,
                  const WeightParams& w) {
  L2Solver l2(alpha, lambda, rhs.grid, w);
  return l2.solve(rhs.values);
}

// ---------------------------------------------------------------------------------------------
// Mixed problem

struct MixedProblem::AlphaData {
  std::complex<double> alpha;
  LiouvilleProfile prof;
  Eigen::VectorXd W;      // W_alpha(y_k)
  Eigen::VectorXd V2;     // V_{2,eps,alpha}(x_k), without the 2 ln eps shift
  Eigen::VectorXd phi;    // phi_eps(x_k)
  Eigen::VectorXd lap_phi;
  Eigen::VectorXd z1, z2;  // Z_{alpha,j}(y_k)
  std::unique_ptr<ProjectorT> T;
  std::unique_ptr<L2Solver> L2;
};

MixedProblem::MixedProblem(GaugeModel model, double eps, MixedGridOptions grid, SolverOptions opt)
    : model_(std::move(model)), eps_(eps), opt_(opt) {
  opt_.weight.validate();
  if (!(eps > 0.0) || eps >= 1.0) throw ConfigError("epsilon must lie in (0, 1)");
  if (grid.n_theta < 8 || grid.n_theta % 2 != 0) {
    throw ConfigError("n_theta must be even and at least 8");
  }
  grids_ = make_two_scale_grids(eps, grid);
  topo_ = std::make_shared<const TopologicalSolution>(
      solve_topological(model_.p(), grids_.x, opt_.newton));
  l1_ = std::make_unique<L1Solver>(*topo_);

  const DiskGrid& gx = *grids_.x;
  const int N = gx.size();
  fprime_U_.resize(N);
  exp_U_.resize(N);
  log_terms_.resize(N);
  H_.resize(N);
  const double b = model_.b();
  const double r0 = far_field_radius(model_);
  for (int k = 0; k < N; ++k) {
    const Point x = gx.node(k);
    fprime_U_[k] = f_prime(topo_->U[k]);
    exp_U_[k] = std::exp(topo_->U[k]);
    double s = 0.0;
    for (const auto& p : model_.p()) s += 0.5 * b * std::log1p(std::norm(x - p));
    for (const auto& q : model_.q()) s += 2.0 * std::log(std::abs(x - q));
    log_terms_[k] = s;
    const Point y = eps_ * x;
    H_[k] = std::abs(y) >= r0 * eps_ ? eval_H(model_, eps_, y)
                                     : std::numeric_limits<double>::quiet_NaN();
  }
}

std::shared_ptr<const MixedProblem::AlphaData> MixedProblem::alpha_data(
    std::complex<double> alpha) const {
  if (cache_ && cache_->alpha == alpha) return cache_;
  auto d = std::make_shared<AlphaData>();
  d->alpha = alpha;
  d->prof = LiouvilleProfile::for_model(model_, alpha);
  const DiskGrid& gx = *grids_.x;
  const DiskGrid& gy = *grids_.y;
  const int N = gx.size();
  const double b = model_.b();
  const double lam = model_.lambda().value();
  const double e2 = eps_ * eps_;
  d->W.resize(N);
  d->V2.resize(N);
  d->phi.resize(N);
  d->lap_phi.resize(N);
  d->z1.resize(N);
  d->z2.resize(N);
  for (int k = 0; k < N; ++k) {
    const Point x = gx.node(k);
    const Point y = gy.node(k);
    d->W[k] = eval_W(d->prof, y);
    d->phi[k] = eval_phi(d->prof, eps_, x);
    d->lap_phi[k] = eval_laplacian_phi(d->prof, eps_, x);
    d->V2[k] = eval_W_star(d->prof, y) + (2.0 * lam - 2.0) * std::log(eps_) + log_terms_[k] -
               0.5 * b * topo_->v[k] - 0.5 * b * e2 * d->phi[k];
    d->z1[k] = eval_Z(alpha, model_.lambda(), 1, y);
    d->z2[k] = eval_Z(alpha, model_.lambda(), 2, y);
  }
  d->T = std::make_unique<ProjectorT>(alpha, model_.lambda(), grids_.y, opt_.weight);
  d->L2 = std::make_unique<L2Solver>(alpha, model_.lambda(), grids_.y, opt_.weight);
  cache_ = d;
  return d;
}

Eigen::VectorXd MixedProblem::residual_g1(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
                                          std::complex<double> alpha) const {
  const auto d = alpha_data(alpha);
  const DiskGrid& gx = *grids_.x;
  const double a = model_.a();
  const double b = model_.b();
  const double e2 = eps_ * eps_;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(gx.size());
  for (int k = 0; k < gx.interior_size(); ++k) {
    const double U = topo_->U[k];
    const double eU = exp_U_[k];
    const double dd = e2 * (d->phi[k] + xi[k]);
    const double e1 = d->V2[k] - 0.5 * b * e2 * xi[k] + e2 * eta[k];
    const double a2 = e1 + U + e2 * (d->phi[k] + xi[k]);  // exponent of e^{V1+V2+...} + ln 2
    if (e1 > opt_.exponent_guard || a2 > opt_.exponent_guard) {
      throw ConvergenceError("exponent overflow guard tripped in g1", e1);
    }
    g[k] = -(eU * em1mx(dd) - eU * eU * em1mx(2.0 * dd)) / e2 - d->lap_phi[k] -
           fprime_U_[k] * d->phi[k] + a * std::exp(e1) + 0.5 * a * (b - 2.0) * std::exp(a2) -
           2.0 * a * e2 * std::exp(2.0 * e1);
  }
  return g;
}

Eigen::VectorXd MixedProblem::residual_g2(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
                                          std::complex<double> alpha) const {
  const auto d = alpha_data(alpha);
  const DiskGrid& gy = *grids_.y;
  const double b = model_.b();
  const double e2 = eps_ * eps_;
  const double c = model_.four_minus_ab();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(gy.size());
  for (int k = 0; k < gy.interior_size(); ++k) {
    const double W = d->W[k];
    const double S = topo_->U[k] + e2 * (d->phi[k] + xi[k]);
    const double e1 = d->V2[k] - 0.5 * b * e2 * xi[k] + e2 * eta[k];
    if (e1 > opt_.exponent_guard || e1 + S > opt_.exponent_guard) {
      throw ConvergenceError("exponent overflow guard tripped in g2", e1);
    }
    const double r1 = std::isnan(H_[k]) ? e1 - W : H_[k] - 0.5 * b * S + e2 * eta[k];
    const double r2 = r1 + S;
    const double eW = std::exp(W);
    const double j1 = shifted_diff(W, r1, e1) - eW * e2 * eta[k];
    const double j2 = shifted_diff(W, r2, e1 + S) - eW * e2 * eta[k];
    g[k] = c * (-j1 / (2.0 * e2) - b * j2 / (4.0 * e2) + std::exp(2.0 * e1));
  }
  return g;
}

double MixedProblem::xi_norm(const Eigen::VectorXd& xi) const {
  const DiskGrid& gx = *grids_.x;
  const Eigen::VectorXd lap = apply_laplacian(gx, xi);
  const double a = norm_L2(gx, xi);
  const double l = norm_L2(gx, lap);
  return std::sqrt(a * a + l * l);
}

double MixedProblem::eta_norm(const Eigen::VectorXd& eta) const {
  return norm_X(*grids_.y, eta, opt_.weight);
}

IterationState MixedProblem::picard_iterate(std::complex<double> alpha,
                                            const IterationState* warm) const {
  const auto d = alpha_data(alpha);
  const int N = grids_.x->size();
  IterationState st;
  st.xi = warm ? warm->xi : Eigen::VectorXd::Zero(N);
  st.eta = warm ? warm->eta : Eigen::VectorXd::Zero(N);
  // Laplacians come from the solved equations; differencing xi on the finest cells would put
  // a round-off floor under the difference norm.
  Eigen::VectorXd lap_xi = warm ? apply_laplacian(*grids_.x, st.xi) : Eigen::VectorXd::Zero(N);
  Eigen::VectorXd lap_eta = warm ? apply_laplacian(*grids_.y, st.eta) : Eigen::VectorXd::Zero(N);
  double prev = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 1; it <= opt_.max_picard; ++it) {
    const Eigen::VectorXd g1 = residual_g1(st.xi, st.eta, alpha);
    const Eigen::VectorXd g2 = residual_g2(st.xi, st.eta, alpha);
    const Eigen::VectorXd xi_new = l1_->solve(g1);
    const Projection proj = d->T->apply(g2);
    const L2Result l2 = d->L2->solve(proj.values);
    Eigen::VectorXd lx = g1 - fprime_U_.cwiseProduct(xi_new);
    lx.tail(N - grids_.x->interior_size()).setZero();
    Eigen::VectorXd le = d->L2->laplacian(l2, proj.values);
    const double diff = h2_norm(*grids_.x, xi_new - st.xi, lx - lap_xi) +
                        x_norm(*grids_.y, l2.eta - st.eta, le - lap_eta, opt_.weight);
    lap_xi = std::move(lx);
    lap_eta = std::move(le);
    st.xi = xi_new;
    st.eta = l2.eta;
    st.iterations = it;
    st.differences.push_back(diff);
    st.c1 = proj.c1;
    st.c2 = proj.c2;
    st.mu1 = l2.mu1;
    st.mu2 = l2.mu2;
    st.log_coefficient = l2.log_coefficient;
    st.l2_consistent = l2.consistent;
    if (diff <= opt_.picard_tol) {
      st.converged = true;
      break;
    }
    growth = diff > prev ? growth + 1 : 0;
    if (growth >= 3) break;
    prev = diff;
  }

  const auto& dv = st.differences;
  int used = 0;
  double logsum = 0.0;
  for (size_t i = dv.size(); i >= 2 && used < 3; --i) {
    if (dv[i - 2] <= 0.0 || dv[i - 1] <= 0.0) break;
    logsum += std::log(dv[i - 1] / dv[i - 2]);
    ++used;
  }
  st.contraction_ratio = used ? std::exp(logsum / used) : 0.0;
  st.fixed_point_defect = dv.empty() ? 0.0 : dv.back();
  st.xi_norm = h2_norm(*grids_.x, st.xi, lap_xi);
  st.eta_norm = x_norm(*grids_.y, st.eta, lap_eta, opt_.weight);
  st.in_ball = st.xi_norm + st.eta_norm <= opt_.ball_radius;
  st.g1_norm = norm_L2(*grids_.x, residual_g1(st.xi, st.eta, alpha));
  const Projection proj = d->T->apply(residual_g2(st.xi, st.eta, alpha));
  st.Tg2_norm = norm_Y(*grids_.y, proj.values, opt_.weight);
  if (!st.converged && opt_.strict) {
    throw ConvergenceError("Picard iteration did not converge", st.fixed_point_defect);
  }
  return st;
}

std::complex<double> MixedProblem::reduced_map(std::complex<double> alpha,
                                               const IterationState& st) const {
  const auto d = alpha_data(alpha);
  const Eigen::VectorXd g2 = residual_g2(st.xi, st.eta, alpha);
  const DiskGrid& gy = *grids_.y;
  return {integrate(gy, g2.cwiseProduct(d->z1)), integrate(gy, g2.cwiseProduct(d->z2))};
}

std::complex<double> MixedProblem::reduced_map(std::complex<double> alpha) const {
  return reduced_map(alpha, picard_iterate(alpha));
}

AlphaSolve MixedProblem::solve_alpha() const {
  AlphaSolve out;
  if (!model_.lambda().is_integer() || model_.all_at_origin()) {
    out.skipped = true;
    out.state = picard_iterate(0.0);
    out.reduced = model_.lambda().is_integer() ? reduced_map(0.0, out.state) : 0.0;
    return out;
  }
  std::complex<double> alpha = 0.0;
  IterationState st = picard_iterate(alpha);
  std::complex<double> F = reduced_map(alpha, st);
  const double h = opt_.alpha_fd_step;
  for (int it = 0; it < opt_.max_alpha_iter && std::abs(F) > opt_.alpha_tol; ++it) {
    Eigen::Matrix2d J;
    for (int c = 0; c < 2; ++c) {
      const std::complex<double> dir = c == 0 ? std::complex<double>(1.0, 0.0)
                                              : std::complex<double>(0.0, 1.0);
      const std::complex<double> ap = alpha + h * dir;
      const IterationState sp = picard_iterate(ap, &st);
      const std::complex<double> Fp = reduced_map(ap, sp);
      J(0, c) = (Fp.real() - F.real()) / h;
      J(1, c) = (Fp.imag() - F.imag()) / h;
    }
    out.jacobian = J;
    const Eigen::Vector2d step = J.fullPivLu().solve(Eigen::Vector2d(-F.real(), -F.imag()));
    const std::complex<double> dstep(step[0], step[1]);
    double damp = 1.0;
    std::complex<double> a_new = alpha + dstep;
    IterationState s_new = picard_iterate(a_new, &st);
    std::complex<double> F_new = reduced_map(a_new, s_new);
    for (int k = 0; k < 6 && std::abs(F_new) >= std::abs(F); ++k) {
      damp *= 0.5;
      a_new = alpha + damp * dstep;
      s_new = picard_iterate(a_new, &st);
      F_new = reduced_map(a_new, s_new);
    }
    alpha = a_new;
    st = std::move(s_new);
    F = F_new;
    out.iterations = it + 1;
    if (std::abs(damp * dstep) < 1e-14 * std::max(1.0, std::abs(alpha))) break;
  }
  if (std::abs(F) > opt_.alpha_tol && opt_.strict) {
    throw ConvergenceError("alpha equation did not converge", std::abs(F));
  }
  out.alpha = alpha;
  out.reduced = F;
  out.state = std::move(st);
  return out;
}

MixedSolution MixedProblem::assemble(std::complex<double> alpha, const IterationState& st) const {
  const auto d = alpha_data(alpha);
  const DiskGrid& gx = *grids_.x;
  const DiskGrid& gy = *grids_.y;
  const int N = gx.size();
  const double a = model_.a();
  const double b = model_.b();
  const double e2 = eps_ * eps_;
  const double kc = model_.liouville_coefficient();
  const double le = 2.0 * std::log(eps_);

  MixedSolution out;
  out.eps = eps_;
  out.alpha = alpha;
  out.u1.resize(N);
  out.u2.resize(N);
  for (int k = 0; k < N; ++k) {
    out.u1[k] = topo_->U[k] - std::numbers::ln2 + e2 * (d->phi[k] + st.xi[k]);
    out.u2[k] = d->V2[k] + le - 0.5 * b * e2 * st.xi[k] + e2 * st.eta[k];
    out.sup_u1_deviation = std::max(out.sup_u1_deviation, e2 * std::abs(d->phi[k] + st.xi[k]));
  }

  const Eigen::VectorXd lap_v = apply_laplacian(gx, topo_->v);
  const Eigen::VectorXd lap_xi = apply_laplacian(gx, st.xi);
  const Eigen::VectorXd lap_eta = apply_laplacian(gy, st.eta);
  for (int k = 0; k < gx.interior_size(); ++k) {
    const Point x = gx.node(k);
    bool near = false;
    for (const auto& p : model_.p()) near = near || std::abs(x - p) < 0.1;
    for (const auto& q : model_.q()) near = near || std::abs(x - q) < 0.1;
    if (near) continue;
    const double g = background_g(model_.p(), x);
    const double lu1 = -g + lap_v[k] + e2 * d->lap_phi[k] + e2 * lap_xi[k];
    const double lu2 = -e2 * kc * std::exp(d->W[k]) + 0.5 * b * g - 0.5 * b * lap_v[k] -
                       0.5 * b * e2 * d->lap_phi[k] - 0.5 * b * e2 * lap_xi[k] +
                       e2 * e2 * lap_eta[k];
    const double u1 = out.u1[k];
    const double u2 = out.u2[k];
    const double e1 = std::exp(u1), e2u = std::exp(u2), e12 = std::exp(u1 + u2);
    const double r1 =
        lu1 + 2.0 * e1 - a * e2u - 4.0 * e1 * e1 + 2.0 * a * e2u * e2u - a * (b - 2.0) * e12;
    const double r2 =
        lu2 + 2.0 * e2u - b * e1 - 4.0 * e2u * e2u + 2.0 * b * e1 * e1 - b * (a - 2.0) * e12;
    out.residual_eq1 = std::max(out.residual_eq1, std::abs(r1));
    out.residual_eq2 = std::max(out.residual_eq2, std::abs(r2));
  }
  return out;
}

double MixedProblem::rescaled_deviation(std::complex<double> alpha, const IterationState& st,
                                        std::complex<double> alpha_ref) const {
  const auto d = alpha_data(alpha);
  const LiouvilleProfile ref = LiouvilleProfile::for_model(model_, alpha_ref);
  const DiskGrid& gy = *grids_.y;
  const double b = model_.b();
  const double e2 = eps_ * eps_;
  double sup = 0.0;
  for (int k = 0; k < gy.size(); ++k) {
    const Point y = gy.node(k);
    const double r = std::abs(y);
    if (r < 0.5 || r > 2.0) continue;
    const double val = d->V2[k] + 0.5 * b * topo_->U[k] - 0.5 * b * e2 * st.xi[k] + e2 * st.eta[k];
    sup = std::max(sup, std::abs(val - eval_W(ref, y)));
  }
  return sup;
}

double extract_beta(const std::function<double(Point)>& u2, double r_lo, double r_hi, int n_radii,
                    int n_theta) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || n_radii < 2 || n_theta < 1) {
    throw ConfigError("invalid fit window for beta");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n_radii; ++i) {
    const double lr = std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * i / (n_radii - 1);
    const double r = std::exp(lr);
    double avg = 0.0;
    for (int j = 0; j < n_theta; ++j) {
      const double th = (j + 0.5) * 2.0 * std::numbers::pi / n_theta;
      avg += u2(std::polar(r, th));
    }
    avg /= n_theta;
    sx += lr;
    sy += avg;
    sxx += lr * lr;
    sxy += lr * avg;
  }
  const double n = n_radii;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -0.5 * slope;
}

double delta_integral(const Rational& lambda) {
  const double lam = lambda.value();
  if (!(lam > 0.5)) throw ConfigError("delta integral needs lambda > 1/2");
  // t = s^{1/lambda} turns it into B(p, 5 - p) / lambda with p = 2 - 1/lambda.
  const double p = 2.0 - 1.0 / lam;
  return std::tgamma(p) * std::tgamma(5.0 - p) / (24.0 * lam);
}

double delta_leading_coefficient(const GaugeModel& model) {
  const double lam = model.lambda().value();
  const double a = model.a();
  const double b = model.b();
  const double num = 64.0 * std::pow(lam, 4) * (a * b * b * b - 16.0) * (lam - 1.0) * std::numbers::pi;
  const double den = (4.0 - a * b) * (2.0 + b) * (2.0 + b) * lam;
  return num / den * delta_integral(model.lambda());
}

std::vector<std::string> check_mixed_case(const GaugeModel& model, bool strict) {
  const Validation v = reject_excluded_case(model);
  if (!v.supported) throw UnsupportedConfiguration(v.message);
  std::vector<std::string> warnings;
  const double lam = model.lambda().value();
  // bN1 + 2N2 <= 2 is covered only with every vortex at the origin.
  if (lam > 1.0 && lam <= 2.0 && !model.all_at_origin(1e-12)) {
    const std::string msg = "lambda = " + model.lambda().str() +
                            " with vortices away from the origin is outside the construction";
    if (strict) throw UnsupportedConfiguration(msg);
    warnings.push_back(msg);
  }
  return warnings;
}

SolveReport solve_mixed(const GaugeModel& model, double eps, const MixedGridOptions& grid,
                        const SolverOptions& opt, SolutionFields* fields) {
  SolveReport rep;
  rep.eps = eps;
  rep.beta_limit = model.beta_limit();
  rep.warnings = check_mixed_case(model, opt.strict);

  if (model.lambda() == Rational(1)) {
    Lambda1Options lo;
    lo.picard_tol = opt.picard_tol;
    lo.max_picard = opt.max_picard;
    lo.ball_radius = opt.ball_radius;
    lo.weight = opt.weight;
    const Lambda1Solution s = solve_lambda1(model.a(), model.b(), eps, lo);
    rep.beta = s.beta;
    rep.picard_iterations = s.iterations;
    rep.g1_norm = s.h1_norm;
    {
      const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s.ygrid.size());
      Eigen::VectorXd h1 = lambda1_h1(model.a(), model.b(), eps, s.ygrid, zero, zero);
      h1[s.ygrid.interior()] = 0.0;
      rep.g1_initial = std::sqrt(integrate_radial(s.xgrid, h1.cwiseAbs2()));
    }
    rep.xi_norm = s.xi_norm;
    rep.eta_norm = s.eta_norm;
    rep.contraction_ratio = s.contraction_ratio;
    rep.residual = std::max(s.residual_eq1, s.residual_eq2);
    rep.sup_u1_deviation = s.sup_u1_deviation;
    rep.log_coefficient = s.log_coefficient;
    rep.picard_converged = s.converged;
    rep.alpha_converged = true;
    rep.residual_ok = rep.residual <= opt.residual_tol;
    rep.x_grid_hash = fnv1a_hex(s.xgrid.descriptor());
    rep.y_grid_hash = fnv1a_hex(s.ygrid.descriptor());
    rep.nondegeneracy = 1.0;
    if (fields) *fields = {nullptr, s.xgrid, s.u1, s.u2};
    if (!s.converged && opt.strict) {
      throw ConvergenceError("Picard iteration did not converge", s.differences.back());
    }
    return rep;
  }

  if (opt.check_nondegeneracy && model.n1() > 0) {
    const double r_top = default_topological_radius(model.p());
    const int n = rings_for_step(r_top, grid.radial_step);
    auto g = make_disk_grid(r_top, n, grid.n_theta);
    const TopologicalSolution t = solve_topological(model.p(), g, opt.newton);
    rep.nondegeneracy = nondegeneracy_estimate(t, opt.newton).sigma_refined;
    if (rep.nondegeneracy < opt.nondegeneracy_min) {
      const std::string msg = "topological solution looks degenerate (sigma = " +
                              std::to_string(rep.nondegeneracy) + ")";
      if (opt.strict) throw UnsupportedConfiguration(msg);
      rep.warnings.push_back(msg);
    }
  } else {
    rep.nondegeneracy = 1.0;  // U = 0: L1 = Delta - 1
  }

  MixedProblem prob(model, eps, grid, opt);
  {
    const Eigen::VectorXd zx = Eigen::VectorXd::Zero(prob.grids().x->size());
    const Eigen::VectorXd zy = Eigen::VectorXd::Zero(prob.grids().y->size());
    rep.g1_initial = norm_L2(*prob.grids().x, prob.residual_g1(zx, zy, 0.0));
  }
  const AlphaSolve as = prob.solve_alpha();
  const MixedSolution ms = prob.assemble(as.alpha, as.state);
  const IterationState& st = as.state;

  rep.alpha = as.alpha;
  rep.alpha_iterations = as.iterations;
  rep.reduced_map_abs = std::abs(as.reduced);
  rep.alpha_converged = as.skipped || std::abs(as.reduced) <= opt.alpha_tol;
  rep.picard_iterations = st.iterations;
  rep.picard_converged = st.converged;
  rep.g1_norm = st.g1_norm;
  rep.Tg2_norm = st.Tg2_norm;
  rep.c1 = st.c1;
  rep.c2 = st.c2;
  rep.xi_norm = st.xi_norm;
  rep.eta_norm = st.eta_norm;
  rep.contraction_ratio = st.contraction_ratio;
  rep.log_coefficient = st.log_coefficient;
  rep.residual = std::max(ms.residual_eq1, ms.residual_eq2);
  rep.residual_ok = rep.residual <= opt.residual_tol;
  rep.sup_u1_deviation = ms.sup_u1_deviation;
  rep.rescaled_deviation = prob.rescaled_deviation(as.alpha, st, as.alpha);
  rep.rescaled_deviation_limit = prob.rescaled_deviation(as.alpha, st, 0.0);
  rep.x_grid_hash = prob.grids().x->hash();
  rep.y_grid_hash = prob.grids().y->hash();

  const double ry = grid.r_out_y;
  const auto& gx = *prob.grids().x;
  rep.beta = extract_beta([&](Point x) { return interpolate(gx, ms.u2, x); }, 0.5 * ry / eps,
                          0.95 * ry / eps);
  if (!st.in_ball) rep.warnings.push_back("Picard iterate left the ball of radius M0");
  if (!st.l2_consistent) rep.warnings.push_back("L2 right-hand side failed the range check");
  if (!rep.picard_converged) rep.warnings.push_back("Picard iteration did not converge");
  if (!rep.alpha_converged) rep.warnings.push_back("alpha equation did not reach tolerance");
  if (!rep.residual_ok) rep.warnings.push_back("full-system residual above tolerance");
  if (fields) *fields = {prob.grids().x, std::nullopt, ms.u1, ms.u2};
  if (opt.strict && !(rep.picard_converged && rep.alpha_converged)) {
    throw ConvergenceError(rep.picard_converged ? "alpha equation did not converge"
                                                : "Picard iteration did not converge",
                           rep.picard_converged ? rep.reduced_map_abs
                                                : (st.differences.empty() ? 0.0 : st.differences.back()));
  }
  return rep;
}

}  // namespace csvortex
