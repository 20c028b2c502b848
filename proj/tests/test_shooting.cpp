#include <cmath>

#include "csvortex/error.hpp"
#include "csvortex/radial.hpp"
#include "csvortex/shooting.hpp"
#include "doctest.h"

using namespace csvortex;

TEST_CASE("radial forces vanish at the far-field limits") {
  // SU3 topological limit (0, 0)
  CHECK(radial_force_1(1, 1, 0.0, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(radial_force_2(1, 1, 0.0, 0.0) == doctest::Approx(0.0).scale(1.0));
  // mixed limit u1 = -ln 2 with u2 -> -inf, any admissible pair
  for (auto [a, b] : admissible_pairs()) {
    CHECK(std::abs(radial_force_1(a, b, -std::log(2.0), -200.0)) < 1e-15);
  }
  // SO5 topological limits (ln 3/2, ln 2)
  CHECK(std::abs(radial_force_1(1, 2, std::log(1.5), std::log(2.0))) < 1e-14);
  CHECK(std::abs(radial_force_2(1, 2, std::log(1.5), std::log(2.0))) < 1e-14);
}

TEST_CASE("tail classification") {
  const ShootingOptions opt;
  auto at = [](double r, double s1, double s2) { return ShootingSample{r, 0.0, s1 / r, 0.0, s2 / r}; };
  CHECK(classify_tail(at(10, 0.0, 0.0), at(40, 0.0, 0.0), opt) == SolutionClass::Topological);
  CHECK(classify_tail(at(10, -4, -4), at(40, -4, -4), opt) == SolutionClass::NonTopological);
  CHECK(classify_tail(at(10, 0.01, -3), at(40, 0.0, -3), opt) == SolutionClass::MixedI);
  CHECK(classify_tail(at(10, -3, 0.0), at(40, -3, 0.0), opt) == SolutionClass::MixedII);
  CHECK(classify_tail(at(10, -0.2, 0.0), at(40, -0.2, 0.0), opt) == SolutionClass::Undetermined);
  CHECK(to_string(SolutionClass::MixedI) == "mixed-I");
}

TEST_CASE("shooting from the origin") {
  const GaugeModel su3(1, 1);
  SUBCASE("small data decays like a nontopological solution") {
    const ShootingState st = radial_shoot(su3, -8.0, -8.0, 1e4);
    CHECK(st.cls == SolutionClass::NonTopological);
    // mass bound: r u' -> -4 + small at the horizon
    CHECK(st.r * st.du1 == doctest::Approx(-4.0).epsilon(1e-2));
    CHECK(st.blowup_radius == 0.0);
  }
  SUBCASE("zero data is the constant topological solution") {
    const ShootingState st = radial_shoot(su3, 0.0, 0.0, 1e4);
    CHECK(st.cls == SolutionClass::Topological);
    CHECK(std::abs(st.u1) < 1e-8);
  }
  SUBCASE("large data blows up") {
    const ShootingState st = radial_shoot(su3, 0.5, -3.0, 1e4);
    CHECK(st.cls == SolutionClass::Undetermined);
    CHECK(st.blowup_radius > 0.0);
    CHECK(st.blowup_radius < 10.0);
  }
  SUBCASE("vortices enter as log slopes at the origin") {
    const GaugeModel m(1, 2, {{0.0, 0.0}});
    ShootingOptions opt;
    opt.samples = 50;
    const ShootingState st = radial_shoot(m, -10.0, -10.0, 1e-2, opt);
    const ShootingSample& s0 = st.trajectory.front();
    CHECK(s0.r * s0.du1 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(s0.u1 == doctest::Approx(2.0 * std::log(s0.r) - 10.0).epsilon(1e-9));
    CHECK(s0.r * s0.du2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(radial_shoot(GaugeModel(1, 1, {{1.0, 0.0}}, {{0.0, 0.0}}), 0.0, 0.0, 10.0),
                  ConfigError);
}

TEST_CASE("radial solution passes the shooting cross-check") {
  Lambda1Options lo;
  lo.radial_step = 1e-3;
  const Lambda1Solution s = solve_lambda1(1, 1, 0.05, lo);
  ProfileCheckOptions po;
  const ProfileCheck pc = check_radial_profile(1, 1, s.xgrid, s.u1, s.u2, po);
  CHECK(pc.segments > 10);
  CHECK(pc.max_deviation < 1e-6);
  CHECK(pc.max_substitution < 1e-5);
  CHECK(pc.cls == SolutionClass::MixedI);
  CHECK(pc.u1_tail == doctest::Approx(-std::log(2.0)).epsilon(1e-3));
}
