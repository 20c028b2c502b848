#include <cmath>
#include <numbers>

#include "csvortex/error.hpp"
#include "csvortex/radial.hpp"
#include "csvortex/solver.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csvortex;
using std::numbers::pi;
using cd = std::complex<double>;

TEST_CASE("delta integral against quadrature and frozen values") {
  struct Case {
    Rational lam;
    double value;
  };
  for (const Case& c : {Case{Rational(1), 0.25}, Case{Rational(3, 2), 0.09952259886058808508},
                        Case{Rational(2), 0.06135923151542564919},
                        Case{Rational(3), 0.03483290960120582978}}) {
    CHECK(delta_integral(c.lam) == doctest::Approx(c.value).epsilon(1e-13));
    const double lam = c.lam.value();
    const double q = oracle::integrate_half_line(
        [&](double t) { return std::pow(t, 2 * lam - 2) / std::pow(1 + std::pow(t, lam), 5); });
    CHECK(q == doctest::Approx(c.value).epsilon(1e-10));
  }
}

TEST_CASE("leading coefficient of the reduced map") {
  // a = 1, b = 2, lambda = 3
  const GaugeModel m(1, 2, {{0.0, 0.0}, {0.0, 0.0}});
  CHECK(delta_leading_coefficient(m) == doctest::Approx(-94.548222351048046462).epsilon(1e-12));
  // (a, b) = (1, 3): ab^3 - 16 = 11 > 0 and 4 - ab > 0
  const GaugeModel g2(1, 3, {}, {{0.0, 0.0}});
  CHECK(delta_leading_coefficient(g2) > 0.0);
  CHECK(delta_leading_coefficient(GaugeModel(1, 1)) == 0.0);
}

TEST_CASE("beta fit recovers the log slope") {
  auto u2 = [](Point x) { return -2.0 * 3.5 * std::log(std::abs(x)) + 0.7 + std::cos(2 * std::arg(x)); };
  CHECK(extract_beta(u2, 10.0, 100.0) == doctest::Approx(3.5).epsilon(1e-12));
  CHECK_THROWS_AS(extract_beta(u2, 10.0, 5.0), ConfigError);
}

TEST_CASE("mixed case screening") {
  CHECK_THROWS_AS(check_mixed_case(GaugeModel(1, 1, {{1.0, 0.0}, {-1.0, 0.0}}), false),
                  UnsupportedConfiguration);
  // a single vortex is centered onto the origin, so lambda = 2 stays in the symmetric case
  const GaugeModel single(1, 2, {{0.5, 0.0}});
  CHECK(single.all_at_origin());
  CHECK(check_mixed_case(single, true).empty());
  CHECK(check_mixed_case(GaugeModel(1, 2, {{0.0, 0.0}, {0.0, 0.0}}), true).empty());
}

TEST_CASE("two-scale grids share their nodes") {
  const TwoScaleGrids g = make_two_scale_grids(0.01, MixedGridOptions{});
  REQUIRE(g.x->size() == g.y->size());
  for (int k : {0, 17, g.x->size() - 1}) {
    CHECK(std::abs(g.y->node(k) - 0.01 * g.x->node(k)) < 1e-12 * std::abs(g.y->node(k)));
  }
  CHECK(g.y->radial().r_out() == doctest::Approx(40.0));
}

TEST_CASE("L2 solve on the orthogonal complement") {
  const GridPtr g = make_disk_grid(40.0, rings_for_step(40.0, 0.05), 64);
  const WeightParams w;
  const L2Solver l2(cd(0.0), Rational(2), g, w);

  SUBCASE("radial data is solvable and satisfies the constraints") {
    const ScalarField rhs = ScalarField::sample(g, [](Point x) { return std::exp(-std::norm(x)); });
    const L2Result r = l2.solve(rhs.values);
    CHECK(r.consistent);
    CHECK(r.constraint_defect <= 1e-8);
    const Eigen::VectorXd back = l2.apply(r.eta);
    double err = 0.0;
    for (int k = 0; k < g->interior_size(); ++k) err = std::max(err, std::abs(back[k] - rhs.values[k]));
    CHECK(err < 1e-8);
  }

  SUBCASE("data outside F_alpha is reported inconsistent") {
    const ScalarField rhs = ScalarField::sample(g, [&](Point x) {
      return std::pow(sigma(x), -2.0 - 2.0 * w.d) * eval_Z(cd(0.0), Rational(2), 1, x);
    });
    CHECK_FALSE(l2.solve(rhs.values).consistent);
  }
}

TEST_CASE("symmetric configuration has a vanishing reduced map") {
  MixedGridOptions go;
  go.radial_step = 0.08;
  go.n_theta = 32;
  const MixedProblem prob(GaugeModel(1, 2, {{0.0, 0.0}, {0.0, 0.0}}), 0.05, go);
  const IterationState st = prob.picard_iterate(cd(0.0));
  CHECK(st.converged);
  CHECK(std::abs(prob.reduced_map(cd(0.0), st)) < 1e-8);
  const AlphaSolve as = prob.solve_alpha();
  CHECK(as.skipped);
  CHECK(as.alpha == cd(0.0));
}

TEST_CASE("radial path for lambda = 1") {
  Lambda1Options opt;
  opt.radial_step = 1e-3;
  const Lambda1Solution s = solve_lambda1(1, 1, 0.05, opt);
  CHECK(s.converged);
  CHECK(s.residual_eq1 < 1e-6);
  CHECK(s.residual_eq2 < 1e-6);
  CHECK(s.beta == doctest::Approx(2.0).epsilon(0.05));
  CHECK(s.sup_u1_deviation < 0.05);
  CHECK(s.eval_u1(1e3) == doctest::Approx(-std::log(2.0)).epsilon(0.05));
}

TEST_CASE("solve_mixed rejects bad input") {
  CHECK_THROWS_AS(solve_mixed(GaugeModel(1, 1, {{1.0, 0.0}, {-1.0, 0.0}}), 0.01),
                  UnsupportedConfiguration);
  CHECK_THROWS_AS(solve_mixed(GaugeModel(1, 1), -0.1), ConfigError);
}
