#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vvc {

inline double sq(double x) { return x * x; }

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace: need n >= 2");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.front() = a;
  v.back() = b;
  return v;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("logspace: positive endpoints required");
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

// Least-squares line y = slope*x + intercept, plus R^2 of the fit.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need matching sizes >= 2");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += e * e;
  }
  f.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  if (n > 2 && sxx > 0.0) f.slope_stderr = std::sqrt(ss_res / ((n - 2) * sxx));
  return f;
}

// Thrown when a requested computation needs assumptions the field does not satisfy.
class AssumptionViolation : public std::runtime_error {
 public:
  explicit AssumptionViolation(const std::string& what) : std::runtime_error(what) {}
};

class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

class IllConditionedFamily : public std::runtime_error {
 public:
  explicit IllConditionedFamily(const std::string& what) : std::runtime_error(what) {}
};

class InsufficientFamily : public std::runtime_error {
 public:
  explicit InsufficientFamily(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vvc
