#pragma once

// Independent reference numerics for the test suite.  Deliberately separate
// from the library's quadrature/rootfind code paths: plain Romberg, central
// differences, and dense grid scans.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Romberg integration on [a,b]; assumes a smooth integrand.
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      int max_level = 22, double tol = 1e-12) {
  std::vector<double> prev, cur;
  double h = b - a;
  prev.push_back(0.5 * h * (f(a) + f(b)));
  for (int k = 1; k <= max_level; ++k) {
    h *= 0.5;
    double s = 0.0;
    const long m = 1L << (k - 1);
    for (long i = 0; i < m; ++i) s += f(a + h * (2.0 * i + 1.0));
    cur.assign(k + 1, 0.0);
    cur[0] = 0.5 * prev[0] + h * s;
    double p4 = 4.0;
    for (int j = 1; j <= k; ++j) {
      cur[j] = (p4 * cur[j - 1] - prev[j - 1]) / (p4 - 1.0);
      p4 *= 4.0;
    }
    if (k > 3 && std::fabs(cur[k] - prev[k - 1]) < tol * (1.0 + std::fabs(cur[k])))
      return cur[k];
    prev = cur;
  }
  return cur.back();
}

// Composite Simpson with fixed panel count (for rough integrands).
inline double simpson(const std::function<double(double)>& f, double a, double b, long n = 4096) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Dense grid minimum of f over [a,b]; returns (arg, value).
inline std::pair<double, double> grid_min(const std::function<double(double)>& f, double a,
                                          double b, long n = 20000) {
  double best_x = a, best = f(a);
  for (long i = 1; i <= n; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

}  // namespace oracle
