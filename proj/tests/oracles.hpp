#pragma once

// Reference routines used only by the tests, written without the library.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

/// Adaptive 7-15 Gauss-Kronrod on [lo, hi].
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-12, int depth = 0) {
  static constexpr std::array<double, 8> xk{0.991455371120812639, 0.949107912342758525,
                                            0.864864423359769073, 0.741531185599394440,
                                            0.586087235467691130, 0.405845151377397167,
                                            0.207784955007898468, 0.0};
  static constexpr std::array<double, 8> wk{0.022935322010529225, 0.063092092629978553,
                                            0.104790010322250184, 0.140653259715525919,
                                            0.169004726639267903, 0.190350578064785410,
                                            0.204432940075298892, 0.209482141084727828};
  static constexpr std::array<double, 4> wg{0.129484966168869693, 0.279705391489276668,
                                            0.381830050505118945, 0.417959183673469388};
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double k = wk[7] * f(c), g = wg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double s = f(c - h * xk[i]) + f(c + h * xk[i]);
    k += wk[i] * s;
    if (i % 2 == 1) g += wg[i / 2] * s;
  }
  k *= h;
  g *= h;
  if (std::abs(k - g) <= tol * std::max(1.0, std::abs(k)) || depth > 40) return k;
  return integrate(f, lo, c, tol, depth + 1) + integrate(f, c, hi, tol, depth + 1);
}

/// Integral over [0, inf) via t = u / (1 - u).
inline double integrate_half_line(const std::function<double(double)>& f, double tol = 1e-12) {
  auto g = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double t = u / (1.0 - u);
    return f(t) / ((1.0 - u) * (1.0 - u));
  };
  return integrate(g, 0.0, 1.0, tol);
}

/// Five point Laplacian of f at x with step h.
inline double laplacian(const std::function<double(std::complex<double>)>& f,
                        std::complex<double> x, double h = 1e-3) {
  const std::complex<double> e1(h, 0.0), e2(0.0, h);
  return (f(x + e1) + f(x - e1) + f(x + e2) + f(x - e2) - 4.0 * f(x)) / (h * h);
}

}  // namespace oracle
