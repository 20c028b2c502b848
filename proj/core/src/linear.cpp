#include "csvortex/linear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "csvortex/error.hpp"

namespace csvortex {

namespace {

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

SparseSolver::SparseSolver(SparseMatrix a, double rel_tol, bool bordered)
    : a_(std::move(a)), tol_(rel_tol) {
  if (a_.rows() != a_.cols()) throw LinearSolveError("sparse solver needs a square matrix");
  row_scale_ = Eigen::VectorXd::Zero(a_.rows());
  for (int k = 0; k < a_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a_, k); it; ++it) {
      row_scale_[it.row()] = std::max(row_scale_[it.row()], std::abs(it.value()));
    }
  }
  for (int i = 0; i < row_scale_.size(); ++i) {
    if (!(row_scale_[i] > 0.0)) throw LinearSolveError("matrix has an empty row");
    row_scale_[i] = 1.0 / row_scale_[i];
  }
  a_ = row_scale_.asDiagonal() * a_;
  a_.makeCompressed();
  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(a_.rows());
  for (int k = 0; k < a_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a_, k); it; ++it) row_sum[it.row()] += std::abs(it.value());
  }
  a_norm_ = row_sum.maxCoeff();
  auto factor = [this](auto& lu) {
    lu.analyzePattern(a_);
    lu.factorize(a_);
    if (lu.info() != Eigen::Success) {
      throw LinearSolveError("sparse LU factorization failed: " + lu.lastErrorMessage());
    }
  };
  if (bordered) {
    lu_natural_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::NaturalOrdering<int>>>();
    lu_natural_->setPivotThreshold(1e-3);
    factor(*lu_natural_);
  } else {
    lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
    factor(*lu_);
  }
}

Eigen::VectorXd SparseSolver::apply_inverse(const Eigen::VectorXd& b) const {
  return lu_ ? Eigen::VectorXd(lu_->solve(b)) : Eigen::VectorXd(lu_natural_->solve(b));
}

Eigen::VectorXd SparseSolver::solve(const Eigen::VectorXd& rhs) const {
  const Eigen::VectorXd b = row_scale_.cwiseProduct(rhs);
  const double bn = b.lpNorm<Eigen::Infinity>();
  if (bn == 0.0) return Eigen::VectorXd::Zero(b.size());
  // normwise backward error |r| / (|A| |x| + |b|) in the max norm
  auto backward = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
    return r.lpNorm<Eigen::Infinity>() / (a_norm_ * x.lpNorm<Eigen::Infinity>() + bn);
  };
  Eigen::VectorXd x = apply_inverse(b);
  Eigen::VectorXd r = b - a_ * x;
  double err = backward(x, r);
  // a few refinement steps toward working precision; stop once they stop paying off
  for (int k = 0; k < 3 && err > 1e-15; ++k) {
    const Eigen::VectorXd xn = x + apply_inverse(r);
    const Eigen::VectorXd rn = b - a_ * xn;
    const double en = backward(xn, rn);
    if (!(en < 0.5 * err)) break;
    x = xn;
    r = rn;
    err = en;
  }
  if (!x.allFinite() || !(err <= tol_)) {
    throw LinearSolveError("linear solve backward error " + fmt_sci(err) +
                           " exceeds tolerance");
  }
  return x;
}

SparseMatrix dirichlet_operator(const DiskGrid& g, const Eigen::VectorXd& potential) {
  const SparseMatrix lap = laplacian_matrix(g);
  std::vector<Triplet> trip;
  trip.reserve(lap.nonZeros() + g.size());
  for (int k = 0; k < lap.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(lap, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  }
  for (int k = 0; k < g.size(); ++k) {
    trip.emplace_back(k, k, g.is_boundary(k) ? 1.0 : potential[k]);
  }
  SparseMatrix m(g.size(), g.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix dirichlet_operator_radial(const RadialGrid& g, const Eigen::VectorXd& potential) {
  const SparseMatrix lap = radial_laplacian_matrix(g);
  std::vector<Triplet> trip;
  for (int k = 0; k < lap.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(lap, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  }
  for (int i = 0; i < g.interior(); ++i) trip.emplace_back(i, i, potential[i]);
  trip.emplace_back(g.interior(), g.interior(), 1.0);
  SparseMatrix m(g.size(), g.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpectralEstimate smallest_singular_value(const DiskGrid& g, const Eigen::VectorXd& potential,
                                         int max_iter, double rel_tol) {
  const int n = g.interior_size();
  const SparseMatrix full = dirichlet_operator(g, potential);
  const SparseMatrix a = full.topLeftCorner(n, n);
  const SparseSolver solver(a, 1e-8);

  Eigen::VectorXd dhalf(n);
  for (int k = 0; k < n; ++k) {
    const int i = g.ring_of(k);
    dhalf[k] = std::sqrt(g.radial().r(i) * g.radial().dr_dt(i));
  }
  // Inverse iteration on B = D^{1/2} A D^{-1/2}, which is symmetric.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (int k = 0; k < n; ++k) x[k] = uni(rng);
  x.normalize();
  double prev = 0.0;
  SpectralEstimate est;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = dhalf.cwiseProduct(solver.solve(x.cwiseQuotient(dhalf)));
    const double rq = x.dot(y);
    const double yn = y.norm();
    if (!(yn > 0.0) || !std::isfinite(yn)) throw LinearSolveError("inverse iteration broke down");
    x = y / yn;
    est.value = 1.0 / std::abs(rq);
    est.iterations = it;
    if (it > 5 && std::abs(rq - prev) <= rel_tol * std::abs(rq)) break;
    prev = rq;
  }
  return est;
}

}  // namespace csvortex
