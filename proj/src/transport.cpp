#include "vvc/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "vvc/bounds.hpp"
#include "vvc/quadrature.hpp"
#include "vvc/rootfind.hpp"
#include "vvc/util.hpp"

namespace vvc {

FlowMap::FlowMap(const VectorField& field) : field_(field) {
  AssumptionReport rep = validate_assumptions(field);
  if (!rep.a1.pass)
    throw AssumptionViolation("FlowMap: mixed-sign or vanishing speed");
  increasing_ = rep.case_sign == CaseSign::increasing;
  T_flush_ = limit_transport_time(field);
}

double FlowMap::travel_time(double x, double y) const {
  return integrate([&](double s) { return 1.0 / field_.a(s); }, x, y, 1e-12);
}

double FlowMap::exit_time(double x) const {
  return increasing_ ? travel_time(x, field_.L) : travel_time(x, 0.0);
}

double FlowMap::position(double x, double t) const {
  if (t < 0.0) throw std::domain_error("FlowMap::position: negative time");
  const double Te = exit_time(x);
  if (t > Te * (1.0 + 1e-12) + 1e-15)
    throw std::domain_error("FlowMap::position: trajectory exited the interval");
  if (t == 0.0) return x;
  const double lo = increasing_ ? x : 0.0;
  const double hi = increasing_ ? field_.L : x;
  // J(x, .) is monotone increasing toward the outflow endpoint
  auto g = [&](double y) { return travel_time(x, y) - t; };
  if (increasing_) {
    if (g(hi) <= 0.0) return hi;
    return find_root(g, lo, hi, 1e-12);
  }
  if (g(lo) <= 0.0) return lo;
  return find_root(g, lo, hi, 1e-12);
}

LimitSolution solve_limit_equation(const VectorField& field,
                                   const std::function<double(double)>& u0, double T,
                                   std::size_t nx, std::size_t nt) {
  FlowMap flow(field);
  LimitSolution sol;
  sol.t_grid = linspace(0.0, T, nt);
  sol.x_grid = linspace(0.0, field.L, nx);
  sol.u.assign(nt, std::vector<double>(nx, 0.0));
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = sol.t_grid[it];
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double x = sol.x_grid[ix];
      const double Te = flow.exit_time(x);
      if (t > Te) continue;  // exited: zero
      const double y = flow.position(x, std::min(t, Te));
      // int_0^t q(Y_x(tau)) dtau = int_x^y q/f' ds along the characteristic
      const double expo =
          integrate([&](double s) { return field.q(s) / field.a(s); }, x, y, 1e-11);
      sol.u[it][ix] = std::exp(expo) * u0(y);
    }
  }
  return sol;
}

ObservabilityReport limit_observability(const VectorField& field, double T) {
  AssumptionReport rep = validate_assumptions(field);
  if (rep.case_sign == CaseSign::mixed)
    throw AssumptionViolation("limit_observability: mixed-sign field");
  ObservabilityReport out;
  out.case_sign = rep.case_sign;
  out.T_crit = limit_transport_time(field);
  out.observable = T >= out.T_crit * (1.0 - 1e-12);
  out.pairing_vanishes = rep.case_sign == CaseSign::decreasing;
  return out;
}

}  // namespace vvc
