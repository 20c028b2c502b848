#include <cmath>
#include <numbers>
#include <random>

#include "csvortex/error.hpp"
#include "csvortex/liouville.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csvortex;
using std::numbers::pi;
using cd = std::complex<double>;

TEST_CASE("W at a generic point matches a high-precision value") {
  const LiouvilleProfile p(0.0, cd(0.3, 0.1), Rational(2), 1, 1);
  CHECK(eval_W(p, cd(0.7, -0.4)) == doctest::Approx(1.27341863509705563955).epsilon(1e-14));
}

TEST_CASE("W solves the Liouville equation pointwise") {
  for (Rational lam : {Rational(1), Rational(3, 2), Rational(2), Rational(3)}) {
    const cd alpha = lam.is_integer() ? cd(0.2, -0.1) : cd(0.0);
    const LiouvilleProfile p(0.4, alpha, lam, 1, 2);
    for (cd z : {cd(0.8, 0.3), cd(-1.1, 0.5), cd(0.2, -1.7)}) {
      const double lap = oracle::laplacian([&](cd y) { return eval_W(p, y); }, z, 1e-4);
      CHECK(lap + eval_weight(p, z) == doctest::Approx(0.0).scale(eval_weight(p, z)).epsilon(1e-5));
    }
  }
}

TEST_CASE("W* removes the origin singularity") {
  const LiouvilleProfile p(0.0, cd(0.0), Rational(3), 1, 2);
  const cd z(1e-3, 2e-3);
  CHECK(eval_W_star(p, z) ==
        doctest::Approx(eval_W(p, z) - 4.0 * std::log(std::abs(z))).epsilon(1e-12));
  CHECK(std::isfinite(eval_W_star(p, cd(0.0))));
  CHECK(eval_weight(p, cd(0.0)) == 0.0);
}

TEST_CASE("half-integer lambda forces alpha = 0") {
  CHECK_THROWS_AS(LiouvilleProfile(0.0, cd(0.1, 0.0), Rational(3, 2), 1, 1), ConfigError);
  CHECK(std::abs(zpow(cd(0.0, 4.0), Rational(1, 2)) - std::sqrt(cd(0.0, 4.0))) < 1e-14);
}

TEST_CASE("disk mass matches 8 pi lambda R^{2 lambda} / (1 + R^{2 lambda})") {
  struct Case {
    int lam;
    double R;
    double mass;
  };
  for (const Case& c : {Case{1, 10.0, 24.883902206651827631}, Case{2, 10.0, 50.260456411795512264},
                        Case{3, 5.0, 75.393398508650484092}}) {
    const LiouvilleProfile p(0.0, cd(0.0), Rational(c.lam), 1, 1);
    const GridPtr g = make_disk_grid(c.R, rings_for_step(c.R, 0.01), 64);
    CHECK(liouville_mass(p, *g) == doctest::Approx(c.mass).epsilon(2e-5));
  }
}

TEST_CASE("kernel functions are the mu and alpha derivatives of W") {
  const cd alpha(0.25, -0.35);
  const Rational lam(2);
  const double h = 1e-6;
  for (cd z : {cd(0.3, 0.9), cd(-1.4, 0.2), cd(2.5, -3.0)}) {
    auto W = [&](double mu, cd al) { return eval_W(LiouvilleProfile(mu, al, lam, 1, 1), z); };
    const double dmu = (W(h, alpha) - W(-h, alpha)) / (2 * h);
    const double dre = (W(0.0, alpha + h) - W(0.0, alpha - h)) / (2 * h);
    const double dim = (W(0.0, alpha + cd(0, h)) - W(0.0, alpha - cd(0, h))) / (2 * h);
    CHECK(eval_Z(alpha, lam, 0, z) == doctest::Approx(dmu).epsilon(1e-7));
    CHECK(eval_Z(alpha, lam, 1, z) == doctest::Approx(-dre / 4.0).epsilon(1e-7));
    CHECK(eval_Z(alpha, lam, 2, z) == doctest::Approx(-dim / 4.0).epsilon(1e-7));
    const cd zc = eval_Z_complex(alpha, lam, z);
    CHECK(zc.real() == eval_Z(alpha, lam, 1, z));
    CHECK(zc.imag() == eval_Z(alpha, lam, 2, z));
  }
}

TEST_CASE("kernel bounds and limit at infinity") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd(0.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const cd z(nd(rng), nd(rng));
    CHECK(std::abs(eval_Z(cd(0.3, 0.4), Rational(3), 0, z)) <= 1.0);
    CHECK(std::abs(eval_Z(cd(0.3, 0.4), Rational(3), 1, z)) <= 0.5);
    CHECK(std::abs(eval_Z(cd(0.3, 0.4), Rational(3), 2, z)) <= 0.5);
  }
  CHECK(eval_Z(cd(0.3, 0.4), Rational(2), 0, cd(1e4, 0.0)) == doctest::Approx(-1.0));
  CHECK_THROWS(eval_Z(cd(0.0), Rational(1), 3, cd(1.0, 0.0)));
}

TEST_CASE("Gram matrix is diagonal at alpha = 0") {
  const GridPtr g = make_disk_grid(50.0, rings_for_step(50.0, 0.04), 64);
  const Eigen::Matrix2d a = gram_matrix(cd(0.0), Rational(2), *g, WeightParams{});
  CHECK(a(0, 0) > 0.0);
  CHECK(a(0, 0) == doctest::Approx(a(1, 1)).epsilon(1e-10));
  CHECK(std::abs(a(0, 1)) <= 1e-10 * a(0, 0));
  CHECK(std::abs(a(1, 0)) <= 1e-10 * a(0, 0));
  CHECK_THROWS_AS(gram_matrix(cd(0.0), Rational(3, 2), *g, WeightParams{}), ConfigError);
}

TEST_CASE("projection removes the kernel components") {
  const GridPtr g = make_disk_grid(50.0, rings_for_step(50.0, 0.04), 64);
  const WeightParams w;
  const Rational lam(2);

  SUBCASE("sigma^{-2-2d} Z_{0,1} at alpha = 0 gives c = (1, 0)") {
    const ScalarField h = ScalarField::sample(g, [&](Point x) {
      return std::pow(sigma(x), -2.0 - 2.0 * w.d) * eval_Z(cd(0.0), lam, 1, x);
    });
    const Projection t = project_T(cd(0.0), lam, h, w);
    CHECK(t.c1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(t.c2) < 1e-10);
    CHECK(t.values.cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("output is orthogonal to Z_1, Z_2 and T is idempotent") {
    const cd alpha(0.2, 0.1);
    const ScalarField h = ScalarField::sample(g, [](Point x) {
      return std::exp(-std::norm(x - Point(0.5, 0.3))) * (1.0 + x.real());
    });
    const Projection t = project_T(alpha, lam, h, w);
    for (int j : {1, 2}) {
      const ScalarField z = ScalarField::sample(g, [&](Point x) { return eval_Z(alpha, lam, j, x); });
      CHECK(std::abs(integrate(*g, t.values.cwiseProduct(z.values))) < 1e-10);
    }
    const Projection tt = project_T(alpha, lam, ScalarField(g, t.values), w);
    CHECK((tt.values - t.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(tt.c1) < 1e-10);
  }

  SUBCASE("identity for half-integer lambda") {
    const ScalarField h = ScalarField::sample(g, [](Point x) { return std::exp(-std::norm(x)); });
    const Projection t = project_T(cd(0.0), Rational(3, 2), h, w);
    CHECK(t.values == h.values);
    CHECK(t.c1 == 0.0);
  }
}

TEST_CASE("kernel annihilation residual shrinks at second order") {
  auto res = [](double step) {
    const GridPtr g = make_disk_grid(20.0, rings_for_step(20.0, step), static_cast<int>(std::lround(3.2 / step)));
    return kernel_annihilation_check(cd(0.2, 0.1), Rational(2), 1, g);
  };
  const double r1 = res(0.05), r2 = res(0.025);
  CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.2));
}
