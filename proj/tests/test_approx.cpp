#include <cmath>
#include <memory>

#include "csvortex/approx.hpp"
#include "csvortex/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csvortex;
using cd = std::complex<double>;

TEST_CASE("P and Q are products of distances") {
  CHECK(eval_PQ(GaugeModel(1, 1), 0.1, Point(2.0, 0.0)).P == 1.0);
  const GaugeModel m1(1, 2, {{1.0, 0.0}}, {{-1.0, 0.0}});
  // centered: p = (1,0) - s, q = (-1,0) - s with 2 s + 2 s' ... shift = (2 - 2) / 4 = 0
  CHECK(eval_PQ(m1, 0.1, Point(1.0, 0.0)).P == doctest::Approx(0.9));
  const GaugeModel m2(1, 1, {}, {{0.0, 0.0}, {0.0, 0.0}});
  CHECK(eval_PQ(m2, 0.5, Point(0.0, 2.0)).Q == doctest::Approx(4.0));
}

TEST_CASE("cutoff is a C2 quintic step") {
  CHECK(eval_cutoff(Point(0.3, 0.0)) == 0.0);
  CHECK(eval_cutoff(Point(0.0, 2.0)) == 1.0);
  const double mid = eval_cutoff(Point(0.75, 0.0));
  CHECK(mid == doctest::Approx(0.5));
  for (double r : {0.5, 1.0}) {
    const CutoffValue lo = cutoff_profile(r - 1e-7), hi = cutoff_profile(r + 1e-7);
    CHECK(std::abs(lo.chi - hi.chi) < 1e-6);
    CHECK(std::abs(lo.d1 - hi.d1) < 1e-4);
    CHECK(std::abs(lo.d2 - hi.d2) < 1e-3);
  }
  const double h = 1e-5;
  for (double r : {0.6, 0.8, 0.95}) {
    const CutoffValue c = cutoff_profile(r);
    CHECK(c.d1 == doctest::Approx((cutoff_profile(r + h).chi - cutoff_profile(r - h).chi) / (2 * h)).epsilon(1e-6));
    CHECK(c.d2 == doctest::Approx((cutoff_profile(r + h).d1 - cutoff_profile(r - h).d1) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("phi and its closed-form Laplacian") {
  const LiouvilleProfile prof(0.0, cd(0.1, 0.2), Rational(2), 1, 2);
  const double eps = 0.1;
  CHECK(eval_phi(prof, eps, Point(0.2, 0.3)) == 0.0);
  const Point z(4.0, -7.0);
  CHECK(eval_phi(prof, eps, z) == doctest::Approx(-1.0 * eval_expW(prof, eps * z)));
  for (Point x : {Point(0.6, 0.3), Point(-0.2, -0.9), Point(3.0, 1.0)}) {
    const double ref = oracle::laplacian([&](Point y) { return eval_phi(prof, eps, y); }, x, 1e-4);
    CHECK(eval_laplacian_phi(prof, eps, x) == doctest::Approx(ref).epsilon(1e-5));
    CHECK(eval_phi(prof, eps, x) <= 0.0);
  }
}

TEST_CASE("H and A vanish with every vortex at the origin") {
  const GaugeModel m(1, 2, {{0.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}});
  CHECK(eval_H(m, 0.01, Point(1.0, 2.0)) == 0.0);
  CHECK(eval_A(m, Point(1.0, 2.0)) == 0.0);
  // b = N1 = 1: centering puts p at the origin
  const GaugeModel half(1, 1, {{0.4, -0.2}});
  CHECK(std::abs(eval_H(half, 0.1, Point(0.0, 1.0))) < 1e-15);
}

TEST_CASE("H_eps = eps^2 A + O(eps^4) for a symmetric pair") {
  const GaugeModel m(1, 2, {{1.0, 0.0}, {-1.0, 0.0}});
  const Point x(0.0, 1.0);
  CHECK(eval_A(m, x) == doctest::Approx(2.0));
  const Point y(0.6, 0.8);
  CHECK(eval_A(m, y) == doctest::Approx(2.0 - 4.0 * 0.36));
  const FarFieldData ff = far_field_data(m);
  CHECK(ff.A1 * std::cos(2 * std::arg(y)) + ff.A2 * std::sin(2 * std::arg(y)) ==
        doctest::Approx(eval_A(m, y)));
  const double e1 = std::abs(eval_H(m, 0.02, x) - 4e-4 * eval_A(m, x));
  const double e2 = std::abs(eval_H(m, 0.01, x) - 1e-4 * eval_A(m, x));
  CHECK(std::log2(e1 / e2) > 2.8);
  CHECK_THROWS_AS(eval_H(m, 0.1, Point(0.1, 0.0)), GridError);
}

TEST_CASE("approximate pair satisfies its defining identities") {
  const GaugeModel m(1, 2, {{0.5, 0.0}, {-0.5, 0.0}});
  const std::vector<Point> p = m.p();
  const double R = default_topological_radius(p);
  const GridPtr g = make_disk_grid(R, rings_for_step(R, 0.05), 32);
  auto topo = std::make_shared<const TopologicalSolution>(solve_topological(m, g));
  const ApproxSolution v(m, 0.05, cd(0.01, -0.02), topo);
  for (Point x : {Point(0.2, 0.3), Point(2.0, -1.0), Point(8.0, 5.0)}) {
    CHECK(std::abs(v.identity_defect_V1(x)) < 1e-10);
    CHECK(std::abs(v.identity_defect_V2(x)) < 1e-9);
    CHECK(v.V2_rescaled(0.05 * x) == doctest::Approx(v.V2(x)).epsilon(1e-12));
  }
  CHECK(std::isfinite(v.V2(Point(0.5, 0.0))));
  CHECK_THROWS_AS(ApproxSolution(m, -1.0, cd(0.0), topo), ConfigError);
}
