#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csvortex/approx.hpp"
#include "csvortex/grid.hpp"
#include "csvortex/linear.hpp"
#include "csvortex/liouville.hpp"
#include "csvortex/model.hpp"
#include "csvortex/topological.hpp"

namespace csvortex {

/// The x-grid (unit scale) and y-grid (eps scale) share their t and theta nodes: node k of the
/// y-grid is eps times node k of the x-grid, so cross-scale terms need no interpolation.
struct MixedGridOptions {
  double radial_step = 0.05;  // h in the stretched coordinate
  int n_theta = 64;
  double r_out_y = 40.0;      // outer radius in the eps-scale variable
};

struct SolverOptions {
  double picard_tol = 1e-9;
  int max_picard = 100;
  double alpha_tol = 1e-8;
  int max_alpha_iter = 12;
  double alpha_fd_step = 1e-4;
  double residual_tol = 1e-6;
  double ball_radius = 1e3;  // M0
  double exponent_guard = 40.0;
  double nondegeneracy_min = 1e-3;
  bool check_nondegeneracy = true;
  WeightParams weight;
  NewtonOptions newton;
  bool strict = false;
};

struct TwoScaleGrids {
  GridPtr x;
  GridPtr y;
};
TwoScaleGrids make_two_scale_grids(double eps, const MixedGridOptions& opt);

/// L1 = Delta + f'(U) with zero Dirichlet data on the outer ring of the x-grid.
class L1Solver {
 public:
  explicit L1Solver(const TopologicalSolution& topo);
  /// Boundary entries of rhs are ignored.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Discrete L1 u at interior nodes, zero on the ring.
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

 private:
  GridPtr grid_;
  Eigen::VectorXd potential_;
  std::unique_ptr<SparseSolver> lu_;
};

/// Convenience wrapper: discrete solution of L1 u = rhs.
ScalarField solve_L1(const TopologicalSolution& topo, const ScalarField& rhs);

struct L2Result {
  Eigen::VectorXd eta;
  double log_coefficient = 0.0;  // c in eta ~ c ln|y|
  double mu1 = 0.0;              // multipliers of e^W Z_1, e^W Z_2 (zero when rhs is in F_alpha)
  double mu2 = 0.0;
  double constraint_defect = 0.0;  // max_i |int eta e^W Z_i| / ||eta||
  double inconsistency = 0.0;      // ||mu1 e^W Z1 + mu2 e^W Z2||_Y / ||rhs||_Y
  bool consistent = true;
};

/// L_{2,alpha} = Delta + (1/4)(4-ab)(2+b) e^{W_alpha} on the eps-scale grid, solved on E_alpha.
///
/// Bordered system: eta at every node, the log coefficient c, and (integer lambda) multipliers
/// mu1, mu2. The outer ring carries r d_r eta + DtN(eta) = c, where DtN has Fourier symbol |m|,
/// i.e. the nonradial modes continue as decaying harmonics and the radial mode as c ln r.
class L2Solver {
 public:
  L2Solver(std::complex<double> alpha, Rational lambda, GridPtr ygrid, WeightParams w = {},
           double consistency_tol = 1e-2);

  L2Result solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& eta) const;
  /// Delta eta read off the solved equation, rhs - k e^W eta - mu e^W Z (interior nodes).
  Eigen::VectorXd laplacian(const L2Result& sol, const Eigen::VectorXd& rhs) const;
  const Eigen::VectorXd& potential() const { return pot_; }

 private:
  GridPtr grid_;
  Rational lambda_;
  WeightParams w_;
  double tol_;
  Eigen::VectorXd pot_;                  // k e^W at nodes
  std::vector<Eigen::VectorXd> ewz_;     // e^W Z_i at nodes
  int n_constraints_;
  int n_multipliers_;
  std::unique_ptr<SparseSolver> lu_;
};

L2Result solve_L2(std::complex<double> alpha, const Rational& lambda, const ScalarField& rhs,
                  const WeightParams& w = {});

struct IterationState {
  Eigen::VectorXd xi;   // x-grid
  Eigen::VectorXd eta;  // y-grid
  int iterations = 0;
  std::vector<double> differences;
  double contraction_ratio = 0.0;  // geometric mean of the last few difference ratios
  double g1_norm = 0.0;            // ||g1||_{L2} at the final iterate
  double Tg2_norm = 0.0;           // ||T_alpha g2||_Y
  double c1 = 0.0;                 // projection coefficients of g2
  double c2 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double log_coefficient = 0.0;
  double xi_norm = 0.0;   // discrete H^2
  double eta_norm = 0.0;  // X
  double fixed_point_defect = 0.0;
  bool converged = false;
  bool in_ball = true;  // xi_norm + eta_norm <= ball_radius
  bool l2_consistent = true;
};

struct AlphaSolve {
  std::complex<double> alpha{0.0, 0.0};
  std::complex<double> reduced = {0.0, 0.0};
  int iterations = 0;
  bool skipped = false;  // non-integer lambda or all vortices at the origin
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();
  IterationState state;
};

struct MixedSolution {
  double eps = 0.0;
  std::complex<double> alpha;
  Eigen::VectorXd u1;  // x-grid nodes
  Eigen::VectorXd u2;
  double residual_eq1 = 0.0;  // max over interior nodes away from vortex points
  double residual_eq2 = 0.0;
  double sup_u1_deviation = 0.0;  // sup |u1 + ln 2 - U|
};

/// One eps: topological solution on the x-grid, the two linear operators, residuals and the
/// fixed-point map for any alpha.
class MixedProblem {
 public:
  MixedProblem(GaugeModel model, double eps, MixedGridOptions grid = {}, SolverOptions opt = {});

  const GaugeModel& model() const { return model_; }
  double eps() const { return eps_; }
  const TwoScaleGrids& grids() const { return grids_; }
  const TopologicalSolution& topological() const { return *topo_; }
  std::shared_ptr<const TopologicalSolution> topological_ptr() const { return topo_; }
  const SolverOptions& options() const { return opt_; }
  const L1Solver& L1() const { return *l1_; }

  Eigen::VectorXd residual_g1(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
                              std::complex<double> alpha) const;
  Eigen::VectorXd residual_g2(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
                              std::complex<double> alpha) const;

  IterationState picard_iterate(std::complex<double> alpha,
                                const IterationState* warm = nullptr) const;
  /// int g2(xi, eta) Z_alpha dy at a fixed point for this alpha.
  std::complex<double> reduced_map(std::complex<double> alpha, const IterationState& st) const;
  std::complex<double> reduced_map(std::complex<double> alpha) const;
  AlphaSolve solve_alpha() const;

  MixedSolution assemble(std::complex<double> alpha, const IterationState& st) const;
  /// sup over 1/2 <= |y| <= 2 of |(u2 + (b/2)U)(y/eps) - 2 ln eps - W_ref(y)|.
  double rescaled_deviation(std::complex<double> alpha, const IterationState& st,
                            std::complex<double> alpha_ref) const;

  /// Discrete H^2 and X norms (Laplacians by differencing).
  double xi_norm(const Eigen::VectorXd& xi) const;
  double eta_norm(const Eigen::VectorXd& eta) const;

 private:
  struct AlphaData;
  std::shared_ptr<const AlphaData> alpha_data(std::complex<double> alpha) const;

  GaugeModel model_;
  double eps_;
  SolverOptions opt_;
  TwoScaleGrids grids_;
  std::shared_ptr<const TopologicalSolution> topo_;
  std::unique_ptr<L1Solver> l1_;
  Eigen::VectorXd fprime_U_, exp_U_, log_terms_, H_;  // x nodes; H at y nodes (NaN inside R0 eps)
  Eigen::VectorXd chi_, dchi_, ddchi_;
  mutable std::shared_ptr<const AlphaData> cache_;
};

/// Least-squares fit of u2 against -2 beta ln|x| + const on r_lo <= |x| <= r_hi.
double extract_beta(const std::function<double(Point)>& u2, double r_lo, double r_hi,
                    int n_radii = 48, int n_theta = 32);

/// int_0^inf t^{2 lambda - 2} / (1 + t^lambda)^5 dt.
double delta_integral(const Rational& lambda);
/// 64 lambda^4 (ab^3 - 16)(lambda - 1) pi / ((4-ab)(2+b)^2 lambda) times delta_integral.
double delta_leading_coefficient(const GaugeModel& model);

struct SolveReport {
  double eps = 0.0;
  std::complex<double> alpha{0.0, 0.0};
  double beta = 0.0;
  double beta_limit = 0.0;
  int picard_iterations = 0;
  int alpha_iterations = 0;
  double g1_initial = 0.0;  // ||g1(0, 0)|| at alpha = 0
  double g1_norm = 0.0;
  double Tg2_norm = 0.0;
  double reduced_map_abs = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double xi_norm = 0.0;
  double eta_norm = 0.0;
  double contraction_ratio = 0.0;
  double residual = 0.0;
  double sup_u1_deviation = 0.0;
  double rescaled_deviation = 0.0;       // against W_{alpha(eps)}
  double rescaled_deviation_limit = 0.0; // against W_0
  double nondegeneracy = 0.0;
  double log_coefficient = 0.0;
  bool picard_converged = false;
  bool alpha_converged = false;
  bool residual_ok = false;
  std::string x_grid_hash;
  std::string y_grid_hash;
  std::vector<std::string> warnings;
};

/// Assembled (u1, u2): on the 2D x-grid, or on a radial grid for the lambda = 1 path.
struct SolutionFields {
  GridPtr grid;
  std::optional<RadialGrid> radial;
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
};

/// Validates the model against the construction's cases, then runs the full pipeline.
/// lambda = 1 is delegated to the radial path.
SolveReport solve_mixed(const GaugeModel& model, double eps, const MixedGridOptions& grid = {},
                        const SolverOptions& opt = {}, SolutionFields* fields = nullptr);

/// Throws UnsupportedConfiguration for the excluded case, and in strict mode for
/// configurations outside the construction's cases. Returns warnings otherwise.
std::vector<std::string> check_mixed_case(const GaugeModel& model, bool strict);

}  // namespace csvortex
