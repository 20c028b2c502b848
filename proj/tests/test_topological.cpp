#include <cmath>
#include <numbers>

#include "csvortex/error.hpp"
#include "csvortex/topological.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csvortex;
using std::numbers::pi;

TEST_CASE("nonlinearity and its derivative") {
  CHECK(f_eval(0.0) == 0.0);
  CHECK(f_eval(-std::log(2.0)) == doctest::Approx(0.25));
  CHECK(f_prime(0.0) == doctest::Approx(-1.0));
  const double h = 1e-6;
  CHECK(f_prime(-0.7) == doctest::Approx((f_eval(-0.7 + h) - f_eval(-0.7 - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("background values match high-precision evaluation") {
  const std::vector<Point> p{{0.0, 0.0}, {1.0, -1.0}};
  const Point x(0.3, 0.2);
  CHECK(background_u0(p, x) == doctest::Approx(-2.57992088136298559427).epsilon(1e-14));
  CHECK(background_g(p, x) == doctest::Approx(3.59852110663872637880).epsilon(1e-14));
}

TEST_CASE("Delta u0 = -g away from the vortex points") {
  const std::vector<Point> p{{0.5, 0.0}, {-0.2, 0.9}};
  for (Point x : {Point(1.3, 0.4), Point(-2.0, -1.0), Point(0.1, 0.1)}) {
    const double lap = oracle::laplacian([&](Point y) { return background_u0(p, y); }, x, 1e-4);
    CHECK(lap == doctest::Approx(-background_g(p, x)).epsilon(1e-5));
  }
}

TEST_CASE("single vortex: flux, sign, decay") {
  const std::vector<Point> p{{0.7, 0.3}};
  const double R = default_topological_radius(p);
  const GridPtr g = make_disk_grid(R, rings_for_step(R, 0.03), 64);
  const TopologicalSolution sol = solve_topological(p, g);
  CHECK(sol.residual() <= 1e-9);
  CHECK(topological_flux(sol) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(sol.U.maxCoeff() <= 0.0);
  // e^U (1 - e^U) ~ |U| far out, so U decays like e^{-|x|}
  CHECK(decay_fit(sol) == doctest::Approx(-1.0).epsilon(0.15));
  CHECK(sol.eval(Point(0.7, 0.3) + Point(1e-3, 0.0)) < -10.0);
  CHECK(sol.eval(Point(1e3, 0.0)) == 0.0);
}

TEST_CASE("radial solve agrees with the 2D solve for vortices at the origin") {
  const std::vector<Point> p{{0.0, 0.0}, {0.0, 0.0}};
  const double R = default_topological_radius(p);
  const GridPtr g = make_disk_grid(R, rings_for_step(R, 0.04), 32);
  const TopologicalSolution sol = solve_topological(p, g);
  const RadialTopological rad = solve_topological_radial(2, g->radial());
  double gap = 0.0;
  for (int k = 0; k < g->size(); ++k) gap = std::max(gap, std::abs(sol.U[k] - rad.U[g->ring_of(k)]));
  CHECK(gap < 1e-6);
  CHECK(topological_flux(sol) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("vortex on a node is rejected") {
  const GridPtr g = make_disk_grid(10.0, 40, 16);
  CHECK_THROWS_AS(build_background({g->node(3)}, g), GridError);
}

TEST_CASE("linearized operator is nondegenerate") {
  const std::vector<Point> p{{0.0, 0.0}};
  const GridPtr g = make_disk_grid(30.0, rings_for_step(30.0, 0.06), 32);
  const TopologicalSolution sol = solve_topological(p, g);
  const NondegeneracyReport rep = nondegeneracy_estimate(sol);
  CHECK(rep.sigma > 1e-3);
  CHECK(rep.stable());
  CHECK(rep.grid_hash != rep.refined_grid_hash);
}
