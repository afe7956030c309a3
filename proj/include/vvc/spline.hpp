#pragma once

#include <cstddef>
#include <vector>

namespace vvc {

// Natural cubic spline on strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double eval(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  std::size_t size() const { return x_.size(); }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

}  // namespace vvc
