#include "csvortex/shooting.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "csvortex/error.hpp"

namespace csvortex {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 4>;  // (w1, w1', w2, w2') in s = ln r, w_j = u_j - 2 N_j s

struct RadialSystem {
  int a, b;
  double n1, n2;  // 2 N_j, the log slopes at the origin

  void operator()(const State& x, State& dx, double s) const {
    const double u1 = x[0] + n1 * s;
    const double u2 = x[2] + n2 * s;
    const double e2s = std::exp(2.0 * s);
    dx[0] = x[1];
    dx[1] = -e2s * radial_force_1(a, b, u1, u2);
    dx[2] = x[3];
    dx[3] = -e2s * radial_force_2(a, b, u1, u2);
  }
};

struct BlowUp {
  double s;
};

ShootingSample to_sample(const State& x, double s, double n1, double n2) {
  const double r = std::exp(s);
  return {r, x[0] + n1 * s, (x[1] + n1) / r, x[2] + n2 * s, (x[3] + n2) / r};
}

}  // namespace

std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Topological: return "topological";
    case SolutionClass::NonTopological: return "nontopological";
    case SolutionClass::MixedI: return "mixed-I";
    case SolutionClass::MixedII: return "mixed-II";
    case SolutionClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

double radial_force_1(int a, int b, double u1, double u2) {
  const double e1 = std::exp(u1), e2 = std::exp(u2);
  return 2.0 * e1 - a * e2 - 4.0 * e1 * e1 + 2.0 * a * e2 * e2 - a * (b - 2.0) * e1 * e2;
}

double radial_force_2(int a, int b, double u1, double u2) {
  const double e1 = std::exp(u1), e2 = std::exp(u2);
  return 2.0 * e2 - b * e1 - 4.0 * e2 * e2 + 2.0 * b * e1 * e1 - b * (a - 2.0) * e1 * e2;
}

SolutionClass classify_tail(const ShootingSample& inner, const ShootingSample& outer,
                            const ShootingOptions& opt) {
  enum Kind { Finite, MinusInf, Unclear };
  auto kind = [&](double slope_in, double slope_out) {
    if (std::abs(slope_in) <= opt.finite_slope_tol && std::abs(slope_out) <= opt.finite_slope_tol) {
      return Finite;
    }
    if (slope_in <= -opt.decay_slope_min && slope_out <= -opt.decay_slope_min) return MinusInf;
    return Unclear;
  };
  const Kind k1 = kind(inner.r * inner.du1, outer.r * outer.du1);
  const Kind k2 = kind(inner.r * inner.du2, outer.r * outer.du2);
  if (k1 == Unclear || k2 == Unclear) return SolutionClass::Undetermined;
  if (k1 == Finite && k2 == Finite) return SolutionClass::Topological;
  if (k1 == MinusInf && k2 == MinusInf) return SolutionClass::NonTopological;
  return k1 == Finite ? SolutionClass::MixedI : SolutionClass::MixedII;
}

ShootingState radial_shoot(const GaugeModel& model, double s1, double s2, double horizon,
                           const ShootingOptions& opt) {
  if (!model.all_at_origin()) throw ConfigError("radial shooting needs all vortices at the origin");
  if (!std::isfinite(s1) || !std::isfinite(s2)) throw ConfigError("shooting data must be finite");
  if (!(opt.r0 > 0.0) || !(horizon > opt.r0)) throw ConfigError("horizon must exceed r0");
  if (opt.samples < 2) throw ConfigError("need at least two trajectory samples");
  if (!(opt.tail_fraction > 0.0 && opt.tail_fraction < 1.0)) {
    throw ConfigError("tail fraction must lie in (0, 1)");
  }

  const RadialSystem sys{model.a(), model.b(), 2.0 * model.n1(), 2.0 * model.n2()};
  const double s0 = std::log(opt.r0);
  const double s_end = std::log(horizon);

  // Series start: w_j = s_j - F_j r^2 / 4, so dw_j/ds = -F_j r^2 / 2.
  const double r2 = opt.r0 * opt.r0;
  const double u1 = sys.n1 * s0 + s1, u2 = sys.n2 * s0 + s2;
  const double f1 = radial_force_1(sys.a, sys.b, u1, u2);
  const double f2 = radial_force_2(sys.a, sys.b, u1, u2);
  State x{s1 - 0.25 * f1 * r2, -0.5 * f1 * r2, s2 - 0.25 * f2 * r2, -0.5 * f2 * r2};

  std::vector<double> times(opt.samples);
  for (int k = 0; k < opt.samples; ++k) {
    times[k] = s0 + (s_end - s0) * k / (opt.samples - 1);
  }
  const double s_tail = std::log(horizon * opt.tail_fraction);

  ShootingState st;
  st.s1 = s1;
  st.s2 = s2;
  auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<State>());
  auto observer = [&](const State& y, double s) {
    const ShootingSample smp = to_sample(y, s, sys.n1, sys.n2);
    st.trajectory.push_back(smp);
    if (!std::isfinite(smp.u1) || !std::isfinite(smp.u2) || smp.u1 > opt.blowup_value ||
        smp.u2 > opt.blowup_value) {
      throw BlowUp{s};
    }
  };
  bool blew_up = false;
  try {
    ode::integrate_times(stepper, sys, x, times.begin(), times.end(), 1e-3, observer);
  } catch (const BlowUp& e) {
    blew_up = true;
    st.blowup_radius = std::exp(e.s);
  } catch (const ode::step_adjustment_error&) {
    blew_up = true;
  }
  if (blew_up && st.blowup_radius == 0.0) st.blowup_radius = st.trajectory.back().r;

  const ShootingSample& last = st.trajectory.back();
  st.r = last.r;
  st.u1 = last.u1;
  st.du1 = last.du1;
  st.u2 = last.u2;
  st.du2 = last.du2;
  if (blew_up) return st;

  const ShootingSample* inner = &st.trajectory.front();
  for (const auto& smp : st.trajectory) {
    if (std::log(smp.r) <= s_tail + 1e-12) inner = &smp;
  }
  st.cls = classify_tail(*inner, last, opt);
  return st;
}

ProfileCheck check_radial_profile(int a, int b, const RadialGrid& g, const Eigen::VectorXd& u1,
                                  const Eigen::VectorXd& u2, const ProfileCheckOptions& opt) {
  const int n = g.interior();
  if (u1.size() != g.size() || u2.size() != g.size()) throw GridError("profile size mismatch");
  if (opt.segment_nodes < 1 || !(opt.max_span > 0.0) || n < 4) {
    throw ConfigError("bad profile check settings");
  }
  const ShootingOptions& so = opt.shooting;

  auto sample = [&](int i) {
    const double jac = 2.0 * g.h() * g.dr_dt(i);
    return ShootingSample{g.r(i), u1[i], (u1[i + 1] - u1[i - 1]) / jac, u2[i],
                          (u2[i + 1] - u2[i - 1]) / jac};
  };

  const RadialSystem sys{a, b, 0.0, 0.0};
  ProfileCheck pc;
  int i0 = 1;
  while (i0 + 1 < n && g.r(i0 + 1) - g.r(i0) <= opt.max_span) {
    int i1 = i0 + 1;
    while (i1 + 1 < n && i1 - i0 < opt.segment_nodes && g.r(i1 + 1) - g.r(i0) <= opt.max_span) ++i1;
    const ShootingSample s = sample(i0);
    State x{s.u1, s.r * s.du1, s.u2, s.r * s.du2};
    ode::integrate_adaptive(
        ode::make_controlled(so.abs_tol, so.rel_tol, ode::runge_kutta_dopri5<State>()), sys, x,
        std::log(g.r(i0)), std::log(g.r(i1)), 1e-3);
    const double dev = std::max(std::abs(x[0] - u1[i1]), std::abs(x[2] - u2[i1]));
    if (!(dev <= pc.max_deviation)) {
      pc.max_deviation = dev;
      pc.worst_radius = g.r(i1);
    }
    ++pc.segments;
    pc.covered_radius = g.r(i1);
    i0 = i1;
  }

  const Eigen::VectorXd l1 = apply_radial_laplacian(g, u1);
  const Eigen::VectorXd l2 = apply_radial_laplacian(g, u2);
  for (int i = 0; i < n; ++i) {
    const double r1 = l1[i] + radial_force_1(a, b, u1[i], u2[i]);
    const double r2 = l2[i] + radial_force_2(a, b, u1[i], u2[i]);
    pc.max_substitution = std::max({pc.max_substitution, std::abs(r1), std::abs(r2)});
  }

  int inner = n - 1;
  while (inner > 1 && g.r(inner) > so.tail_fraction * g.r(n - 1)) --inner;
  const ShootingSample in = sample(inner), out = sample(n - 1);
  pc.cls = classify_tail(in, out, so);
  pc.u1_tail = out.u1;
  pc.u2_tail_slope = out.r * out.du2;
  return pc;
}

}  // namespace csvortex
