#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csvortex {

/// Points in the plane are stored as complex numbers x1 + i x2.
using Point = std::complex<double>;

/// Exact rational number with positive denominator in lowest terms.
struct Rational {
  long num = 0;
  long den = 1;

  Rational() = default;
  Rational(long n, long d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Group { SU3, SO5, G2 };

/// Which entry of the admissible pair is a: (a,b) as listed, or swapped.
enum class Orientation { AB, BA };

Group parse_group(std::string_view tag);
Orientation parse_orientation(std::string_view tag);
std::string to_string(Group g);
std::string to_string(Orientation o);

/// Off-diagonal Cartan entries (a,b) of K = [[2,-b],[-a,2]].
std::pair<int, int> cartan_pair(Group g, Orientation o = Orientation::AB);

/// Accepts "SU3", "SO5", "G2", optionally suffixed with ":ab" or ":ba".
std::pair<int, int> cartan_pair(std::string_view group_tag);

bool is_admissible(int a, int b);

/// The five admissible ordered pairs.
std::vector<std::pair<int, int>> admissible_pairs();

Rational lambda_of(int b, int n1, int n2);

struct CenteredVortices {
  std::vector<Point> p;
  std::vector<Point> q;
  Point shift;  // subtracted from every point
};

/// Translates both lists so that b*sum(p) + 2*sum(q) = 0.
CenteredVortices center_vortices(const std::vector<Point>& p, const std::vector<Point>& q, int b);

/// Gauge parameters and vortex data. Points are centered on construction.
class GaugeModel {
 public:
  GaugeModel(int a, int b, std::vector<Point> p = {}, std::vector<Point> q = {});

  int a() const { return a_; }
  int b() const { return b_; }
  const std::vector<Point>& p() const { return p_; }
  const std::vector<Point>& q() const { return q_; }
  int n1() const { return static_cast<int>(p_.size()); }
  int n2() const { return static_cast<int>(q_.size()); }
  Rational lambda() const { return lambda_of(b_, n1(), n2()); }

  /// 4 - ab, positive for every admissible pair.
  double four_minus_ab() const { return 4.0 - a_ * b_; }
  /// (1/4)(4-ab)(2+b), the coefficient of e^W in the Liouville equation.
  double liouville_coefficient() const { return 0.25 * (4.0 - a_ * b_) * (2.0 + b_); }
  /// Largest |p_j|, |q_k|; zero without vortices.
  double max_vortex_radius() const;
  bool all_at_origin(double tol = 1e-14) const;
  /// Exponent of u2 at infinity: bN1/2 + N2 + 2.
  double beta_limit() const { return 0.5 * b_ * n1() + n2() + 2.0; }

 private:
  int a_;
  int b_;
  std::vector<Point> p_;
  std::vector<Point> q_;
};

struct SolutionTypeLimits {
  /// ln((K^-1)_{1a} + (K^-1)_{2a}) for a = 1, 2; empty when the argument is not positive.
  std::optional<double> topological_limit_1;
  std::optional<double> topological_limit_2;
  /// -ln K_11 = -ln 2.
  double mixed_limit_u1;
};

SolutionTypeLimits solution_type_limits(int a, int b);

struct Validation {
  bool supported = true;
  std::string message;
};

/// Flags b=1, N1=2, N2=0 with p2 = -p1 != 0 (after centering) as unsupported.
Validation reject_excluded_case(const GaugeModel& model);

}  // namespace csvortex
