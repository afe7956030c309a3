#pragma once

#include <functional>
#include <vector>

#include "vvc/field.hpp"

namespace vvc {

// Characteristic flow of x' = f'(x) on [0,L], computed by inverting the
// travel-time integral rather than by time stepping.
class FlowMap {
 public:
  explicit FlowMap(const VectorField& field);

  bool increasing() const { return increasing_; }

  // signed travel time J(x,y) = int_x^y ds / f'(s)
  double travel_time(double x, double y) const;

  // time for the trajectory from x to leave through the outflow endpoint
  double exit_time(double x) const;

  // Y_x(t); throws std::domain_error once the trajectory has exited
  double position(double x, double t) const;

 private:
  VectorField field_;
  bool increasing_ = true;
  double T_flush_ = 0.0;
};

struct LimitSolution {
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  std::vector<std::vector<double>> u;  // u[it][ix]
};

// Exact characteristics solution of the inviscid observation equation
//   (d_t - f' d_x - q) u = 0
// with the sign-dependent boundary condition; zero past the exit time.
LimitSolution solve_limit_equation(const VectorField& field,
                                   const std::function<double(double)>& u0, double T,
                                   std::size_t nx = 513, std::size_t nt = 9);

struct ObservabilityReport {
  bool observable = false;
  double T_crit = 0.0;  // flushing time
  CaseSign case_sign = CaseSign::mixed;
  // duality pairing: zero for decreasing fields, weighted boundary integral otherwise
  bool pairing_vanishes = false;
};

ObservabilityReport limit_observability(const VectorField& field, double T);

}  // namespace vvc
