#include "verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "csvortex/approx.hpp"
#include "csvortex/liouville.hpp"
#include "csvortex/model.hpp"
#include "csvortex/radial.hpp"
#include "csvortex/shooting.hpp"
#include "csvortex/solver.hpp"
#include "csvortex/topological.hpp"
#include "parallel.hpp"

namespace csvortex::app {

namespace {

using cd = std::complex<double>;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const cd kAlpha = std::polar(0.2, 0.3);

// L2 norm of v over nodes with r_lo <= |x| <= r_hi.
double annulus_norm(const DiskGrid& g, const Eigen::VectorXd& v, double r_lo, double r_hi) {
  Eigen::VectorXd m(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const double r = std::abs(g.node(k));
    m[k] = (!g.is_boundary(k) && r >= r_lo && r <= r_hi) ? v[k] * v[k] : 0.0;
  }
  return std::sqrt(integrate(g, m));
}

// ---------------------------------------------------------------------------------------------

CheckResult liouville_mass_check(const VerifyOptions& opt) {
  CheckResult res{1, "liouville-mass", false, {}, 0.0};
  const double R = 1e3;
  const GridPtr g = make_disk_grid(R, rings_for_step(R, 0.025), 64);
  auto pairs = admissible_pairs();
  if (opt.quick) pairs.resize(2);
  const std::array<Rational, 4> lambdas{Rational(1), Rational(3, 2), Rational(2), Rational(3)};
  double worst = 0.0;
  std::string where;
  int count = 0;
  for (const auto& [a, b] : pairs) {
    for (const Rational& lam : lambdas) {
      for (const cd alpha : {cd{}, kAlpha}) {
        if (!lam.is_integer() && alpha != cd{}) continue;  // W_alpha needs integer lambda
        const LiouvilleProfile prof(0.0, alpha, lam, a, b);
        const double target = 8.0 * std::numbers::pi * lam.value();
        const double err = std::abs(liouville_mass(prof, *g) - target) / target;
        ++count;
        if (err > worst) {
          worst = err;
          where = "(a,b)=(" + std::to_string(a) + "," + std::to_string(b) + ") lambda=" +
                  lam.str() + " |alpha|=" + sci(std::abs(alpha));
        }
      }
    }
  }
  res.pass = worst <= 1e-3;
  res.detail = "max rel err " + sci(worst) + " over " + std::to_string(count) + " profiles, worst " + where;
  return res;
}

CheckResult liouville_order_check(const VerifyOptions&) {
  CheckResult res{2, "liouville-residual-order", false, {}, 0.0};
  const std::array<std::pair<double, int>, 3> levels{{{0.05, 64}, {0.025, 128}, {0.0125, 256}}};
  const double R = 20.0, r_lo = 0.25, r_hi = 4.0;
  std::array<GridPtr, 3> grids;
  for (int l = 0; l < 3; ++l) grids[l] = make_disk_grid(R, rings_for_step(R, levels[l].first), levels[l].second);

  double lo = 1e9, hi = -1e9;
  int count = 0;
  auto record = [&](const std::array<double, 3>& e) {
    for (int l = 0; l < 2; ++l) {
      const double p = std::log2(e[l] / e[l + 1]);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    ++count;
  };
  for (const Rational lam : {Rational(1), Rational(2), Rational(3)}) {
    for (const cd alpha : {cd{}, kAlpha}) {
      const LiouvilleProfile prof(0.0, alpha, lam, 1, 1);
      std::array<double, 3> ew{};
      std::array<std::array<double, 3>, 3> ez{};
      for (int l = 0; l < 3; ++l) {
        const DiskGrid& g = *grids[l];
        ew[l] = annulus_norm(g, liouville_residual(prof, grids[l], r_lo).values, r_lo, r_hi);
        for (int j = 0; j < 3; ++j) {
          Eigen::VectorXd z(g.size());
          for (int k = 0; k < g.size(); ++k) z[k] = eval_Z(alpha, lam, j, g.node(k));
          Eigen::VectorXd r = apply_laplacian(g, z);
          for (int k = 0; k < g.size(); ++k) r[k] += eval_weight(prof, g.node(k)) * z[k];
          ez[j][l] = annulus_norm(g, r, r_lo, r_hi);
        }
      }
      record(ew);
      for (const auto& e : ez) record(e);
    }
  }
  res.pass = lo >= 1.6 && hi <= 2.4;
  res.detail = "observed orders in [" + sci(lo) + ", " + sci(hi) + "] over " + std::to_string(count) +
               " sequences (W and Z_0..Z_2, lambda 1..3)";
  return res;
}

CheckResult projection_check(const VerifyOptions& opt) {
  CheckResult res{3, "projection-algebra", false, {}, 0.0};
  const GridPtr g = make_disk_grid(50.0, rings_for_step(50.0, 0.05), 64);
  const WeightParams w;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int samples = opt.quick ? 20 : 100;

  double gram_off = 0.0, orth = 0.0, idem = 0.0, bound = 0.0;
  for (const Rational lam : {Rational(1), Rational(2), Rational(3)}) {
    const Eigen::Matrix2d a0 = gram_matrix(cd{}, lam, *g, w);
    gram_off = std::max(gram_off, std::max(std::abs(a0(0, 1)), std::abs(a0(1, 0))) / a0(0, 0));
    for (const cd alpha : {cd{}, kAlpha}) {
      const ProjectorT T(alpha, lam, g, w);
      Eigen::VectorXd z1(g->size()), z2(g->size()), wz(g->size());
      for (int k = 0; k < g->size(); ++k) {
        const Point x = g->node(k);
        z1[k] = eval_Z(alpha, lam, 1, x);
        z2[k] = eval_Z(alpha, lam, 2, x);
        wz[k] = std::pow(sigma(x), -2.0 - 2.0 * w.d);
      }
      for (int s = 0; s < samples; ++s) {
        // a few random bumps plus a random amount of the removed directions
        std::array<Point, 5> c;
        std::array<double, 5> amp, width;
        for (int m = 0; m < 5; ++m) {
          c[m] = std::polar(6.0 * uni(rng), 2.0 * std::numbers::pi * uni(rng));
          amp[m] = normal(rng);
          width[m] = 0.3 + 2.0 * uni(rng);
        }
        const double k1 = normal(rng), k2 = normal(rng);
        Eigen::VectorXd h(g->size());
        for (int k = 0; k < g->size(); ++k) {
          double v = wz[k] * (k1 * z1[k] + k2 * z2[k]);
          for (int m = 0; m < 5; ++m) v += amp[m] * std::exp(-std::norm(g->node(k) - c[m]) / (width[m] * width[m]));
          h[k] = v;
        }
        const Eigen::VectorXd th = T.apply(h).values;
        const double hn = norm_Y(*g, h, w);
        for (const Eigen::VectorXd* z : {&z1, &z2}) {
          const double num = std::abs(integrate(*g, th.cwiseProduct(*z)));
          const double den = integrate(*g, h.cwiseProduct(*z).cwiseAbs());
          orth = std::max(orth, num / den);
        }
        idem = std::max(idem, norm_Y(*g, T.apply(th).values - th, w) / hn);
        bound = std::max(bound, norm_Y(*g, th, w) / hn);
      }
    }
  }
  res.pass = gram_off <= 1e-10 && orth <= 1e-8 && idem <= 1e-10 && bound <= 10.0;
  res.detail = "|a12(0)|/a11 " + sci(gram_off) + ", orthogonality " + sci(orth) + ", idempotence " +
               sci(idem) + ", max ||Th||/||h|| " + sci(bound) + " (" + std::to_string(samples) +
               " random h per case)";
  return res;
}

CheckResult topological_check(const VerifyOptions& opt) {
  CheckResult res{4, "topological-solver", false, {}, 0.0};
  std::vector<std::pair<std::string, std::vector<Point>>> cases;
  const int nmax = opt.quick ? 2 : 3;
  for (int n = 1; n <= nmax; ++n) {
    cases.push_back({"coincident N1=" + std::to_string(n), std::vector<Point>(n, Point{})});
    std::vector<Point> sep;
    if (n == 1) {
      sep = {Point{0.7, 0.3}};
    } else {
      for (int j = 0; j < n; ++j) sep.push_back(std::polar(1.5, 2.0 * std::numbers::pi * j / n + 0.2));
    }
    cases.push_back({"separated N1=" + std::to_string(n), sep});
  }
  std::vector<std::string> lines(cases.size());
  std::vector<char> ok(cases.size(), 0);
  parallel_for(static_cast<int>(cases.size()), [&](int c) {
    const auto& [name, p] = cases[c];
    const double R = default_topological_radius(p);
    const GridPtr g = make_disk_grid(R, rings_for_step(R, 0.05), 64);
    const TopologicalSolution sol = solve_topological(p, g);
    const double umax = sol.U.maxCoeff();
    const double flux = topological_flux(sol);
    const double rate = decay_fit(sol);
    const int n = static_cast<int>(p.size());
    bool pass = umax <= 0.0 && std::abs(flux - n) <= 1e-3 && rate >= -1.15 && rate <= -0.85;
    std::string line = name + ": max U " + sci(umax) + ", flux err " + sci(flux - n) + ", decay " + sci(rate);
    if (std::abs(p.front()) == 0.0) {
      const RadialTopological rad = solve_topological_radial(n, g->radial());
      double sup = 0.0;
      for (int k = 0; k < g->size(); ++k) sup = std::max(sup, std::abs(sol.U[k] - rad.U[g->ring_of(k)]));
      pass = pass && sup <= 1e-4;
      line += ", radial gap " + sci(sup);
    }
    lines[c] = line;
    ok[c] = pass;
  });
  res.pass = true;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    res.pass = res.pass && ok[c];
    res.detail += (c ? "; " : "") + lines[c];
  }
  return res;
}

CheckResult lambda1_check(const VerifyOptions&) {
  CheckResult res{5, "mixed-lambda1", false, {}, 0.0};
  const std::vector<double> eps{0.05, 0.025, 0.0125};
  const GaugeModel model(1, 1);
  std::vector<SolveReport> reps(eps.size());
  parallel_for(static_cast<int>(eps.size()), [&](int i) { reps[i] = solve_mixed(model, eps[i]); });
  bool conv = true;
  double resid = 0.0;
  std::vector<double> dbeta, dev;
  for (const auto& r : reps) {
    conv = conv && r.picard_converged;
    resid = std::max(resid, r.residual);
    dbeta.push_back(std::abs(r.beta - 2.0));
    dev.push_back(r.sup_u1_deviation);
  }
  const double slope = loglog_slope(eps, dbeta);
  bool shrinking = true;
  for (std::size_t i = 1; i < dev.size(); ++i) shrinking = shrinking && dev[i] < 0.75 * dev[i - 1];
  res.pass = conv && resid <= 1e-6 && slope >= 1.6 && slope <= 2.4 && shrinking;
  res.detail = std::string("Picard ") + (conv ? "converged" : "FAILED") + ", max residual " + sci(resid) +
               ", |beta-2| = " + sci(dbeta[0]) + "," + sci(dbeta[1]) + "," + sci(dbeta[2]) +
               " (slope " + sci(slope) + "), sup|u1+ln2| = " + sci(dev[0]) + "," + sci(dev[1]) + "," +
               sci(dev[2]);
  return res;
}

// Criteria 6 and 8 share one eps ladder on a lambda = 3 configuration with separated vortices.
struct Ladder {
  std::vector<double> eps{0.02, 0.01, 0.005};
  std::vector<SolveReport> reps;
};

const Ladder& generic_ladder() {
  static const Ladder ladder = [] {
    Ladder l;
    const GaugeModel model(1, 1, {Point{1.0, 0.0}, Point{-0.5, 0.5}}, {Point{0.0, -0.5}});
    l.reps.resize(l.eps.size());
    parallel_for(static_cast<int>(l.eps.size()), [&](int i) { l.reps[i] = solve_mixed(model, l.eps[i]); });
    return l;
  }();
  return ladder;
}

CheckResult generic_check(const VerifyOptions&) {
  CheckResult res{6, "mixed-generic", false, {}, 0.0};
  const Ladder& l = generic_ladder();
  bool conv = true;
  std::vector<double> a, db, dev;
  double beta0 = 0.0;
  for (const auto& r : l.reps) {
    conv = conv && r.picard_converged && r.alpha_converged;
    a.push_back(std::abs(r.alpha));
    db.push_back(std::abs(r.beta - r.beta_limit));
    dev.push_back(r.rescaled_deviation);
    beta0 = r.beta_limit;
  }
  const double sa = loglog_slope(l.eps, a);
  const double sb = loglog_slope(l.eps, db);
  bool bounded = true, decreasing = true;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double q = (a[i] / l.eps[i]) / (a[i - 1] / l.eps[i - 1]);
    bounded = bounded && q >= 0.5 && q <= 2.0;
    decreasing = decreasing && dev[i] < dev[i - 1];
  }
  res.pass = conv && sa >= 0.8 && bounded && sb >= 1.6 && sb <= 2.4 && decreasing;
  std::ostringstream os;
  os << (conv ? "converged" : "NOT converged") << ", |alpha|/eps = ";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << sci(a[i] / l.eps[i]);
  os << " (slope " << sci(sa) << "), |beta-" << beta0 << "| slope " << sci(sb) << ", W_alpha gap = ";
  for (std::size_t i = 0; i < dev.size(); ++i) os << (i ? "," : "") << sci(dev[i]);
  res.detail = os.str();
  return res;
}

CheckResult linearization_check(const VerifyOptions&) {
  CheckResult res{7, "reduced-map-linearization", false, {}, 0.0};
  const GaugeModel model(1, 2, {Point{}, Point{}});
  const MixedProblem prob(model, 1e-3);
  const double K = delta_leading_coefficient(model);
  double worst = 0.0;
  std::string vals;
  for (const cd alpha : {cd{1e-3, 0.0}, cd{0.0, 1e-3}}) {
    const cd ratio = prob.reduced_map(alpha) / alpha;
    worst = std::max(worst, std::abs(ratio - K) / std::abs(K));
    vals += (vals.empty() ? "" : ", ") + sci(ratio.real()) + (ratio.imag() < 0 ? "" : "+") + sci(ratio.imag()) + "i";
  }
  res.pass = worst <= 0.05;
  res.detail = "lambda=3, eps=1e-3: F(alpha)/alpha = " + vals + " vs K = " + sci(K) + ", rel gap " + sci(worst);
  return res;
}

CheckResult scaling_check(const VerifyOptions&) {
  CheckResult res{8, "scaling-ladder", false, {}, 0.0};
  const Ladder& l = generic_ladder();
  std::vector<double> g1, xi, eta;
  for (const auto& r : l.reps) {
    g1.push_back(r.g1_initial);
    xi.push_back(r.xi_norm);
    eta.push_back(r.eta_norm);
  }
  bool ok = true;
  std::ostringstream os;
  os << "ratios g1:";
  for (std::size_t i = 1; i < g1.size(); ++i) {
    const double q = g1[i - 1] / g1[i];
    ok = ok && q >= 1.7 && q <= 2.3;
    os << " " << sci(q);
  }
  os << ", xi:";
  for (std::size_t i = 1; i < xi.size(); ++i) {
    const double q = xi[i - 1] / xi[i];
    ok = ok && q >= 1.7 && q <= 2.3;
    os << " " << sci(q);
  }
  const double emax = *std::max_element(eta.begin(), eta.end());
  const double emin = *std::min_element(eta.begin(), eta.end());
  const double ball = SolverOptions{}.ball_radius;
  ok = ok && emax / emin <= 1.5 && emax <= ball;
  os << ", ||eta||_X in [" << sci(emin) << ", " << sci(emax) << "]";
  res.pass = ok;
  res.detail = os.str();
  return res;
}

CheckResult cross_oracle_check(const VerifyOptions&) {
  CheckResult res{9, "shooting-cross-oracle", false, {}, 0.0};
  const Lambda1Solution s = solve_lambda1(1, 1, 0.0125);
  const ProfileCheck pc = check_radial_profile(1, 1, s.xgrid, s.u1, s.u2);
  const double u1gap = std::abs(pc.u1_tail + std::numbers::ln2);
  res.pass = s.converged && pc.max_deviation <= 1e-6 && pc.max_substitution <= 1e-6 &&
             pc.cls == SolutionClass::MixedI && u1gap <= 1e-6;
  res.detail = "segment deviation " + sci(pc.max_deviation) + " (" + std::to_string(pc.segments) +
               " segments to r=" + sci(pc.covered_radius) + "), substitution " + sci(pc.max_substitution) +
               ", class " + to_string(pc.cls) + ", |u1+ln2| " + sci(u1gap) + ", r u2' " +
               sci(pc.u2_tail_slope);
  return res;
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opt, const std::vector<int>& ids) {
  using Fn = CheckResult (*)(const VerifyOptions&);
  const std::array<Fn, 9> checks{liouville_mass_check, liouville_order_check, projection_check,
                                 topological_check,    lambda1_check,         generic_check,
                                 linearization_check,  scaling_check,         cross_oracle_check};
  const std::array<const char*, 9> names{"liouville-mass",      "liouville-residual-order",
                                         "projection-algebra",  "topological-solver",
                                         "mixed-lambda1",       "mixed-generic",
                                         "reduced-map-linearization", "scaling-ladder",
                                         "shooting-cross-oracle"};
  std::vector<CheckResult> out;
  for (int id = 1; id <= 9; ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = checks[id - 1](opt);
    } catch (const std::exception& e) {
      r = {id, names[id - 1], false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  }
  return out;
}

std::string format_result(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s  %d %-26s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, "  (%.1f s)", r.seconds);
  return std::string(head) + " " + r.detail + tail;
}

}  // namespace csvortex::app
