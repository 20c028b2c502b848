#include <cmath>
#include <numbers>
#include <sstream>

#include "csvortex/error.hpp"
#include "csvortex/grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csvortex;
using std::numbers::pi;

TEST_CASE("radial nodes are sinh-stretched and end at R") {
  const RadialGrid g(50.0, 120);
  CHECK(g.r_out() == doctest::Approx(50.0));
  for (int i = 0; i < g.interior(); ++i) {
    CHECK(g.r(i) == doctest::Approx(std::sinh((i + 0.5) * g.h())));
    CHECK(g.r(i) < g.r(i + 1));
  }
  CHECK(g.t_of_r(g.r(7)) == doctest::Approx(g.t(7)));
  const RadialGrid s = g.scaled(0.01);
  CHECK(s.r(5) == doctest::Approx(0.01 * g.r(5)));
  CHECK(s.h() == g.h());
}

TEST_CASE("radial quadrature against adaptive Gauss-Kronrod") {
  auto f = [](double r) { return std::exp(-r * r) * (1.0 + r); };
  const double ref = 2.0 * pi * oracle::integrate([&](double r) { return f(r) * r; }, 0.0, 12.0);
  // 2 pi (1/2 + sqrt(pi)/4); the tail beyond r = 12 is below 1e-60
  CHECK(ref == doctest::Approx(5.925756652005647).epsilon(1e-13));
  const RadialGrid g(12.0, rings_for_step(12.0, 0.02));
  Eigen::VectorXd v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = f(g.r(i));
  CHECK(integrate_radial(g, v) == doctest::Approx(ref).epsilon(1e-5));
}

TEST_CASE("disk weights sum to the disk area and integrate a nonradial function") {
  const GridPtr g = make_disk_grid(8.0, rings_for_step(8.0, 0.03), 48);
  CHECK(g->weights().sum() == doctest::Approx(pi * 64.0).epsilon(1e-12));
  CHECK(g->area() == doctest::Approx(pi * 64.0));
  // x1^2 e^{-|x|^2}: angular mean 1/2, so pi int r^3 e^{-r^2} dr = pi/2
  const ScalarField f = ScalarField::sample(g, [](Point x) {
    return x.real() * x.real() * std::exp(-std::norm(x));
  });
  CHECK(integrate(f) == doctest::Approx(pi / 2.0).epsilon(1e-4));
}

TEST_CASE("discrete Laplacian converges at second order on smooth data") {
  auto u = [](Point x) { return std::exp(-std::norm(x - Point(0.3, -0.2))); };
  auto err_at = [&](double step) {
    const GridPtr g = make_disk_grid(6.0, rings_for_step(6.0, step), static_cast<int>(std::lround(3.2 / step)));
    const ScalarField f = ScalarField::sample(g, u);
    const Eigen::VectorXd lap = apply_laplacian(*g, f.values);
    double err = 0.0;
    for (int k = 0; k < g->size(); ++k) {
      const double r = std::abs(g->node(k));
      if (g->is_boundary(k) || r < 0.5 || r > 3.0) continue;
      err = std::max(err, std::abs(lap[k] - oracle::laplacian(u, g->node(k), 1e-4)));
    }
    return err;
  };
  const double e1 = err_at(0.08), e2 = err_at(0.04);
  CHECK(e2 < 0.02);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("radial Laplacian of r^2 is 4") {
  const RadialGrid g(10.0, rings_for_step(10.0, 0.01));
  Eigen::VectorXd v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = g.r(i) * g.r(i);
  const Eigen::VectorXd lap = apply_radial_laplacian(g, v);
  for (int i = 0; i < g.interior(); ++i) CHECK(lap[i] == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("weighted norms of a compactly concentrated bump") {
  const GridPtr g = make_disk_grid(20.0, rings_for_step(20.0, 0.04), 32);
  const ScalarField f = ScalarField::sample(g, [](Point x) { return std::exp(-std::norm(x)); });
  // ||f||_L2^2 = pi/2
  CHECK(norm_L2(*g, f.values) == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-4));
  const WeightParams w;
  CHECK(norm_Y(f, w) > norm_L2(*g, f.values));
  CHECK(norm_X(f, w) > 0.0);
}

TEST_CASE("interpolation reproduces bilinear data in (t, theta)") {
  const GridPtr g = make_disk_grid(5.0, 60, 32);
  const ScalarField f = ScalarField::sample(g, [](Point x) { return std::exp(-std::norm(x)); });
  CHECK(interpolate(*g, f.values, Point(0.4, 0.7)) ==
        doctest::Approx(std::exp(-0.65)).epsilon(5e-3));
  CHECK(interpolate(*g, f.values, Point(9.0, 0.0), -1.0) == -1.0);
}

TEST_CASE("tail bound and outer radius selection") {
  // int_{|x|>R} c |x|^-p = 2 pi c R^{2-p} / (p - 2)
  CHECK(tail_bound(3.0, 10.0, 4.0) >= 2.0 * pi * 3.0 * 0.01 / 2.0 * (1.0 - 1e-12));
  const double r = select_r_out(3.0, 4.0, 1e-6);
  CHECK(tail_bound(3.0, r, 4.0) <= 1e-6 * (1.0 + 1e-12));
  CHECK(tail_bound(3.0, 0.99 * r, 4.0) > 1e-6);
}

TEST_CASE("grid hashes are stable digests of the descriptor") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  const GridPtr g1 = make_disk_grid(5.0, 40, 16);
  const GridPtr g2 = make_disk_grid(5.0, 40, 16);
  const GridPtr g3 = make_disk_grid(5.0, 41, 16);
  CHECK(g1->hash() == g2->hash());
  CHECK(g1->hash() != g3->hash());
  std::ostringstream os;
  write_field_csv(os, *g1, Eigen::VectorXd::Zero(g1->size()), "zero");
  CHECK(os.str().find(g1->hash()) != std::string::npos);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS(RadialGrid(-1.0, 10));
  CHECK_THROWS(RadialGrid(1.0, 0));
  CHECK_THROWS(make_disk_grid(1.0, 10, 2));
  WeightParams w;
  w.d = 0.3;
  CHECK_THROWS_AS(w.validate(), ConfigError);
}
