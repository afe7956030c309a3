#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vvc {

using Fn1 = std::function<double(double)>;

// Adaptive Gauss–Kronrod (G7,K15).  Deterministic node set, absolute tolerance.
double integrate(const Fn1& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 52);

// Integral of f over [a,b] where f has an integrable (e.g. logarithmic)
// singularity at the endpoint `a` (or `b` if sing_at_b).  Dyadic panels
// shrinking geometrically toward the singular endpoint.
double integrate_endpoint_singular(const Fn1& f, double a, double b,
                                   bool sing_at_b, double abs_tol = 1e-10);

// Integral over [a, +infinity) via x = a + w*(1-t)/t on t in (0,1].
// Integrand must decay at least like x^{-3/2}.
double integrate_to_infinity(const Fn1& f, double a, double width_scale,
                             double abs_tol = 1e-10);

struct QuadNodes {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};

// Gauss–Legendre rule of order n (computed once, cached).
const QuadNodes& gauss_legendre(std::size_t n);

// Composite Gauss–Legendre nodes mapped to [a,b]: `panels` panels of order per_panel.
struct MappedQuad {
  std::vector<double> x;
  std::vector<double> w;
};
MappedQuad composite_gl(double a, double b, std::size_t panels, std::size_t per_panel = 16);

}  // namespace vvc
