#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <memory>

#include "csvortex/grid.hpp"

namespace csvortex {

/// Sparse LU factorization with a normwise backward-error check on every solve.
/// Rows are equilibrated by their largest entry first, since stretched-grid stencils span
/// many orders of magnitude. Up to three steps of iterative refinement follow the LU solve.
///
/// Bordered systems (a banded block plus a few dense rows and columns at the end) keep the
/// natural ordering with diagonal-preferring pivots. Fill then stays inside the band and the
/// border; fill-reducing reordering or free row pivoting would spread the dense rows.
class SparseSolver {
 public:
  explicit SparseSolver(SparseMatrix a, double rel_tol = 1e-10, bool bordered = false);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  const SparseMatrix& matrix() const { return a_; }
  int size() const { return static_cast<int>(a_.rows()); }

 private:
  SparseMatrix a_;  // row-scaled
  Eigen::VectorXd row_scale_;
  double tol_;
  double a_norm_ = 0.0;  // max-norm of the scaled matrix
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::NaturalOrdering<int>>> lu_natural_;

  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& b) const;
};

/// Square operator on all nodes: interior rows Delta + diag(potential), boundary rows identity.
SparseMatrix dirichlet_operator(const DiskGrid& g, const Eigen::VectorXd& potential);
SparseMatrix dirichlet_operator_radial(const RadialGrid& g, const Eigen::VectorXd& potential);

/// Smallest |eigenvalue| of Delta + diag(potential) restricted to interior nodes with zero
/// boundary data. The operator is symmetric in the weights r r' of the stretched coordinate,
/// so this is also its smallest singular value in that inner product.
struct SpectralEstimate {
  double value = 0.0;
  int iterations = 0;
};
SpectralEstimate smallest_singular_value(const DiskGrid& g, const Eigen::VectorXd& potential,
                                         int max_iter = 300, double rel_tol = 1e-10);

}  // namespace csvortex
