#include "vvc/rootfind.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace vvc {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::invalid_argument("find_root: endpoints do not bracket a root");
  for (int it = 0; it < max_iter; ++it) {
    if (hi - lo <= x_tol) break;
    // secant candidate, fall back to midpoint when it leaves the bracket
    double x = lo - flo * (hi - lo) / (fhi - flo);
    const double mid = 0.5 * (lo + hi);
    if (!(x > lo + 0.1 * x_tol && x < hi - 0.1 * x_tol)) x = mid;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (flo * fx < 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    // force occasional bisection so the bracket provably shrinks
    if (it % 2 == 1) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      if (fm == 0.0) return m;
      if (flo * fm < 0.0) {
        hi = m;
        fhi = fm;
      } else {
        lo = m;
        flo = fm;
      }
    }
  }
  return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double a, double b, double x_tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

double golden_max(const std::function<double(double)>& f, double a, double b, double x_tol) {
  return golden_min([&](double x) { return -f(x); }, a, b, x_tol);
}

double grid_refine_max(const std::function<double(double)>& f, double a, double b,
                       std::size_t grid_points, double x_tol) {
  if (grid_points < 3) grid_points = 3;
  double best_x = a, best_f = f(a);
  std::vector<double> xs(grid_points), fs(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    fs[i] = f(xs[i]);
    if (fs[i] > best_f) {
      best_f = fs[i];
      best_x = xs[i];
    }
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid_points; ++i)
    if (xs[i] == best_x) k = i;
  const double lo = xs[k == 0 ? 0 : k - 1];
  const double hi = xs[k + 1 >= grid_points ? grid_points - 1 : k + 1];
  if (hi <= lo) return best_x;
  return golden_max(f, lo, hi, x_tol);
}

}  // namespace vvc
