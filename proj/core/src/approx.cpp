#include "csvortex/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csvortex/error.hpp"

namespace csvortex {

PQ eval_PQ(const GaugeModel& model, double eps, Point x) {
  PQ out;
  for (const auto& p : model.p()) out.P *= std::abs(x - eps * p);
  for (const auto& q : model.q()) out.Q *= std::abs(x - eps * q);
  return out;
}

CutoffValue cutoff_profile(double r) {
  if (r <= 0.5) return {};
  if (r >= 1.0) return {1.0, 0.0, 0.0};
  const double s = 2.0 * (r - 0.5);
  const double s2 = s * s;
  return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 2.0 * 30.0 * s2 * (1.0 - s) * (1.0 - s),
          4.0 * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)};
}

double eval_cutoff(Point x) { return cutoff_profile(std::abs(x)).chi; }

double eval_phi(const LiouvilleProfile& prof, double eps, Point z) {
  const double chi = eval_cutoff(z);
  if (chi == 0.0) return 0.0;
  return -0.5 * prof.a * prof.b * eval_expW(prof, eps * z) * chi;
}

double eval_laplacian_phi(const LiouvilleProfile& prof, double eps, Point z) {
  const double r = std::abs(z);
  const CutoffValue c = cutoff_profile(r);
  if (c.chi == 0.0 && c.d1 == 0.0 && c.d2 == 0.0) return 0.0;
  const Point y = eps * z;
  const double ew = eval_expW(prof, y);
  const std::complex<double> gw = eval_grad_W(prof, y);
  const double lap_e = eps * eps * ew * (std::norm(gw) - prof.coefficient() * ew);
  const double radial = (gw.real() * z.real() + gw.imag() * z.imag()) / r;
  const double lap = lap_e * c.chi + 2.0 * eps * ew * radial * c.d1 + ew * (c.d2 + c.d1 / r);
  return -0.5 * prof.a * prof.b * lap;
}

double far_field_radius(const GaugeModel& model) { return 1.0 + 5.0 * model.max_vortex_radius(); }

double eval_H(const GaugeModel& model, double eps, Point x) {
  const double r = std::abs(x);
  if (r < far_field_radius(model) * eps) throw GridError("H_eps is defined only for |x| >= R0 eps");
  double h = 0.0;
  // Each factor ln|x - eps p| - ln|x| = ln|1 - eps p / x| stays accurate for small eps.
  for (const auto& p : model.p()) h += model.b() * std::log(std::abs(1.0 - eps * p / x));
  for (const auto& q : model.q()) h += 2.0 * std::log(std::abs(1.0 - eps * q / x));
  return h;
}

double eval_A(const GaugeModel& model, Point x) {
  const double r2 = std::norm(x);
  double s2 = 0.0, s4 = 0.0;
  for (const auto& p : model.p()) {
    const double d = p.real() * x.real() + p.imag() * x.imag();
    s2 += 0.5 * model.b() * std::norm(p);
    s4 += model.b() * d * d;
  }
  for (const auto& q : model.q()) {
    const double d = q.real() * x.real() + q.imag() * x.imag();
    s2 += std::norm(q);
    s4 += 2.0 * d * d;
  }
  return s2 / r2 - s4 / (r2 * r2);
}

FarFieldData far_field_data(const GaugeModel& model) {
  std::complex<double> s{0.0, 0.0};
  for (const auto& p : model.p()) s += 0.5 * model.b() * p * p;
  for (const auto& q : model.q()) s += q * q;
  return {far_field_radius(model), -s.real(), -s.imag()};
}

ApproxSolution::ApproxSolution(GaugeModel model, double eps, std::complex<double> alpha,
                               std::shared_ptr<const TopologicalSolution> topo)
    : model_(std::move(model)),
      eps_(eps),
      prof_(LiouvilleProfile::for_model(model_, alpha)),
      topo_(std::move(topo)) {
  if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
  if (!topo_) throw ConfigError("approximate solution needs a topological solution");
  if (topo_->p.size() != model_.p().size()) {
    throw ConfigError("topological solution does not match the model's u1 vortices");
  }
}

double ApproxSolution::log_terms(Point x) const {
  double s = 0.0;
  for (const auto& p : model_.p()) s += 0.5 * model_.b() * std::log1p(std::norm(x - p));
  for (const auto& q : model_.q()) s += 2.0 * std::log(std::abs(x - q));
  return s;
}

double ApproxSolution::V1(Point x) const {
  return topo_->eval(x) - std::numbers::ln2 + eps_ * eps_ * eval_phi(prof_, eps_, x);
}

double ApproxSolution::V2(Point x) const {
  const double b = model_.b();
  const double v = topo_->eval_v(x);
  return eval_W_star(prof_, eps_ * x) + (2.0 * prof_.lambda.value() - 2.0) * std::log(eps_) +
         log_terms(x) - 0.5 * b * v - 0.5 * b * eps_ * eps_ * eval_phi(prof_, eps_, x);
}

double ApproxSolution::V2_rescaled(Point y) const {
  const double b = model_.b();
  const Point x = y / eps_;
  double s = eval_W_star(prof_, y);
  for (const auto& p : model_.p()) s += 0.5 * b * std::log(eps_ * eps_ + std::norm(y - eps_ * p));
  for (const auto& q : model_.q()) s += 2.0 * std::log(std::abs(y - eps_ * q));
  const double v = topo_->eval_v(x);
  return s - 0.5 * b * v - 0.5 * b * eps_ * eps_ * eval_phi(prof_, eps_, x);
}

double ApproxSolution::identity_defect_V2(Point x) const {
  const double b = model_.b();
  const PQ pq = eval_PQ(model_, eps_, eps_ * x);
  const double phi = eval_phi(prof_, eps_, x);
  return V2(x) + 0.5 * b * (topo_->eval(x) + eps_ * eps_ * phi) - b * std::log(pq.P) -
         2.0 * std::log(pq.Q) - eval_W_star(prof_, eps_ * x);
}

double ApproxSolution::identity_defect_V1(Point x) const {
  return V1(x) + std::numbers::ln2 - topo_->eval(x) - eps_ * eps_ * eval_phi(prof_, eps_, x);
}

}  // namespace csvortex
