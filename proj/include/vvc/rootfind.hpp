#pragma once

#include <functional>

namespace vvc {

// Root of f on a bracketing interval [lo,hi], bisection with secant acceleration.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-12, int max_iter = 200);

// Location of the minimum of f on [a,b] by golden-section search.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double x_tol = 1e-10);

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double x_tol = 1e-10);

// Grid scan followed by golden refinement around the best grid cell.
// Returns the maximizing abscissa.
double grid_refine_max(const std::function<double(double)>& f, double a, double b,
                       std::size_t grid_points, double x_tol = 1e-10);

}  // namespace vvc
