#include <cmath>

#include "csvortex/error.hpp"
#include "csvortex/model.hpp"
#include "doctest.h"

using namespace csvortex;

TEST_CASE("group tags map to Cartan pairs") {
  CHECK(cartan_pair("SU3") == std::pair{1, 1});
  CHECK(cartan_pair("so5") == std::pair{1, 2});
  CHECK(cartan_pair("G2") == std::pair{1, 3});
  CHECK(cartan_pair("G2:ba") == std::pair{3, 1});
  CHECK(cartan_pair("SO5:ab") == std::pair{1, 2});
  CHECK_THROWS_AS(cartan_pair("SU4"), ConfigError);
  CHECK_THROWS_AS(cartan_pair("SO5:xy"), ConfigError);
}

TEST_CASE("admissible pairs are exactly those with 4 - ab > 0 and a or b equal to 1") {
  int count = 0;
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; b <= 5; ++b) {
      const bool expected = a >= 1 && b >= 1 && a * b < 4 && (a == 1 || b == 1);
      CHECK(is_admissible(a, b) == expected);
      count += expected;
    }
  }
  CHECK(count == 5);
  CHECK(admissible_pairs().size() == 5u);
  for (auto [a, b] : admissible_pairs()) CHECK(is_admissible(a, b));
}

TEST_CASE("rationals are reduced with positive denominator") {
  CHECK(Rational(4, 2) == Rational(2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(3, 2).str() == "3/2");
  CHECK(Rational(5).str() == "5");
  CHECK(Rational(3, 2).value() == doctest::Approx(1.5));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("lambda = b N1 / 2 + N2 + 1") {
  CHECK(lambda_of(1, 0, 0) == Rational(1));
  CHECK(lambda_of(1, 1, 0) == Rational(3, 2));
  CHECK(lambda_of(2, 2, 0) == Rational(3));
  CHECK(lambda_of(3, 1, 1) == Rational(7, 2));
  CHECK(lambda_of(1, 3, 2) == Rational(9, 2));
}

TEST_CASE("centering removes b sum p + 2 sum q") {
  const std::vector<Point> p{{1.0, 2.0}, {-0.5, 0.25}};
  const std::vector<Point> q{{3.0, -1.0}};
  const CenteredVortices c = center_vortices(p, q, 3);
  Point s = 0.0;
  for (Point z : c.p) s += 3.0 * z;
  for (Point z : c.q) s += 2.0 * z;
  CHECK(std::abs(s) < 1e-14);
  CHECK(std::abs((p[0] - c.p[0]) - c.shift) < 1e-15);
  CHECK(std::abs((q[0] - c.q[0]) - c.shift) < 1e-15);
  // weight b N1 + 2 N2 = 8, so shift = (3 (0.5 + 2.25 i) + 2 (3 - i)) / 8
  CHECK(std::abs(c.shift - Point(7.5 / 8.0, 4.75 / 8.0)) < 1e-15);
}

TEST_CASE("gauge model derived quantities") {
  const GaugeModel m(1, 2, {{0.0, 0.0}, {0.0, 0.0}});
  CHECK(m.n1() == 2);
  CHECK(m.lambda() == Rational(3));
  CHECK(m.four_minus_ab() == 2.0);
  CHECK(m.liouville_coefficient() == doctest::Approx(2.0));
  CHECK(m.beta_limit() == doctest::Approx(4.0));
  CHECK(m.all_at_origin());
  CHECK_THROWS_AS(GaugeModel(2, 2), ConfigError);
}

TEST_CASE("far-field limits of the three solution types") {
  // K^-1 column sums: SU3 gives (1, 1), SO5 with (a, b) = (1, 2) gives (3/2, 2).
  const SolutionTypeLimits su3 = solution_type_limits(1, 1);
  REQUIRE(su3.topological_limit_1);
  CHECK(*su3.topological_limit_1 == doctest::Approx(0.0));
  CHECK(*su3.topological_limit_2 == doctest::Approx(0.0));
  const SolutionTypeLimits so5 = solution_type_limits(1, 2);
  CHECK(*so5.topological_limit_1 == doctest::Approx(std::log(1.5)));
  CHECK(*so5.topological_limit_2 == doctest::Approx(std::log(2.0)));
  for (auto [a, b] : admissible_pairs()) {
    CHECK(solution_type_limits(a, b).mixed_limit_u1 == doctest::Approx(-0.6931471805599453));
  }
}

TEST_CASE("the b = 1 antipodal pair is rejected") {
  CHECK_FALSE(reject_excluded_case(GaugeModel(1, 1, {{1.0, 0.0}, {-1.0, 0.0}})).supported);
  // Any two distinct u1 vortices become antipodal after centering.
  CHECK_FALSE(reject_excluded_case(GaugeModel(2, 1, {{2.0, 1.0}, {0.0, 1.0}})).supported);
  CHECK(reject_excluded_case(GaugeModel(1, 1, {{1.0, 1.0}, {1.0, 1.0}})).supported);
  CHECK(reject_excluded_case(GaugeModel(1, 2, {{1.0, 0.0}, {-1.0, 0.0}})).supported);
  CHECK(reject_excluded_case(GaugeModel(1, 1, {{1.0, 0.0}, {-1.0, 0.0}}, {{0.0, 0.0}})).supported);
}
