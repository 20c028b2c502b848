#include "csvortex/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "csvortex/error.hpp"

namespace csvortex {

Rational::Rational(long n, long d) {
  if (d == 0) throw ConfigError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long g = std::gcd(n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::string upper(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '(' || c == ')' || c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

Group parse_group(std::string_view tag) {
  const std::string t = upper(tag);
  if (t == "SU3") return Group::SU3;
  if (t == "SO5") return Group::SO5;
  if (t == "G2") return Group::G2;
  throw ConfigError("unknown gauge group '" + std::string(tag) + "' (expected SU3, SO5 or G2)");
}

Orientation parse_orientation(std::string_view tag) {
  const std::string t = upper(tag);
  if (t.empty() || t == "AB") return Orientation::AB;
  if (t == "BA") return Orientation::BA;
  throw ConfigError("unknown orientation '" + std::string(tag) + "' (expected ab or ba)");
}

std::string to_string(Group g) {
  switch (g) {
    case Group::SU3: return "SU3";
    case Group::SO5: return "SO5";
    case Group::G2: return "G2";
  }
  return "?";
}

std::string to_string(Orientation o) { return o == Orientation::AB ? "ab" : "ba"; }

std::pair<int, int> cartan_pair(Group g, Orientation o) {
  int second = 1;
  switch (g) {
    case Group::SU3: second = 1; break;
    case Group::SO5: second = 2; break;
    case Group::G2: second = 3; break;
  }
  return o == Orientation::AB ? std::pair{1, second} : std::pair{second, 1};
}

std::pair<int, int> cartan_pair(std::string_view group_tag) {
  const auto colon = group_tag.find(':');
  if (colon == std::string_view::npos) return cartan_pair(parse_group(group_tag));
  return cartan_pair(parse_group(group_tag.substr(0, colon)),
                     parse_orientation(group_tag.substr(colon + 1)));
}

bool is_admissible(int a, int b) {
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  return lo == 1 && hi >= 1 && hi <= 3;
}

std::vector<std::pair<int, int>> admissible_pairs() {
  return {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}};
}

Rational lambda_of(int b, int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw ConfigError("negative vortex count");
  return Rational(static_cast<long>(b) * n1 + 2L * n2 + 2L, 2);
}

CenteredVortices center_vortices(const std::vector<Point>& p, const std::vector<Point>& q, int b) {
  CenteredVortices out{p, q, Point{0.0, 0.0}};
  const double mass = static_cast<double>(b) * p.size() + 2.0 * q.size();
  if (mass == 0.0) return out;
  Point moment{0.0, 0.0};
  for (const auto& x : p) moment += static_cast<double>(b) * x;
  for (const auto& x : q) moment += 2.0 * x;
  out.shift = moment / mass;
  for (auto& x : out.p) x -= out.shift;
  for (auto& x : out.q) x -= out.shift;
  return out;
}

GaugeModel::GaugeModel(int a, int b, std::vector<Point> p, std::vector<Point> q) : a_(a), b_(b) {
  if (!is_admissible(a, b)) {
    throw ConfigError("(a,b) = (" + std::to_string(a) + "," + std::to_string(b) +
                      ") is not an admissible rank-2 Cartan pair");
  }
  for (const auto* list : {&p, &q}) {
    for (const auto& x : *list) {
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw ConfigError("vortex point with non-finite coordinates");
      }
    }
  }
  auto c = center_vortices(p, q, b);
  p_ = std::move(c.p);
  q_ = std::move(c.q);
}

double GaugeModel::max_vortex_radius() const {
  double m = 0.0;
  for (const auto& x : p_) m = std::max(m, std::abs(x));
  for (const auto& x : q_) m = std::max(m, std::abs(x));
  return m;
}

bool GaugeModel::all_at_origin(double tol) const { return max_vortex_radius() <= tol; }

SolutionTypeLimits solution_type_limits(int a, int b) {
  if (!is_admissible(a, b)) throw ConfigError("inadmissible Cartan pair");
  // K^-1 = [[2, b], [a, 2]] / (4 - ab)
  const double det = 4.0 - a * b;
  const double col1 = (2.0 + a) / det;
  const double col2 = (b + 2.0) / det;
  SolutionTypeLimits out;
  if (col1 > 0) out.topological_limit_1 = std::log(col1);
  if (col2 > 0) out.topological_limit_2 = std::log(col2);
  out.mixed_limit_u1 = -std::log(2.0);
  return out;
}

Validation reject_excluded_case(const GaugeModel& model) {
  if (model.b() == 1 && model.n1() == 2 && model.n2() == 0) {
    const Point p1 = model.p()[0];
    const Point p2 = model.p()[1];
    const double scale = std::max(1.0, std::abs(p1));
    if (std::abs(p1) > 1e-12 && std::abs(p1 + p2) <= 1e-12 * scale) {
      return {false,
              "unsupported configuration: b=1 with two u1 vortices at p2=-p1 != 0 is not covered "
              "by the construction"};
    }
  }
  return {};
}

}  // namespace csvortex
