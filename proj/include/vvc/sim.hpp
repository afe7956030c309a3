#pragma once

#include <functional>
#include <vector>

#include "vvc/bounds.hpp"
#include "vvc/field.hpp"
#include "vvc/logval.hpp"
#include "vvc/quadrature.hpp"
#include "vvc/spectral.hpp"

namespace vvc {

struct SolveOptions {
  double dt = 0.0;          // 0: use eps/50
  std::size_t n_snapshots = 5;
};

struct Trajectory {
  char variable = 'v';                    // 'v','z','y','u'
  double eps = 0.0;
  double T = 0.0;
  std::vector<double> x;                  // interior nodes
  std::vector<double> t_snap;
  std::vector<std::vector<double>> snap;  // states at t_snap
  std::vector<double> t_step;             // every time level
  std::vector<double> flux0;              // eps d_x(.)(t,0) at every level
  std::vector<double> final_state;
};

// Conjugated heat evolution eps v_t + P_eps v = 0 with Dirichlet data
// v(t,0) = g(t), v(t,L) = 0 (g may be null for free decay).
Trajectory solve_conjugated_heat(const OperatorDiscretization& disc, double T,
                                 const Fn1& g, const std::vector<double>& init,
                                 const SolveOptions& opts = {});

// Original drift equation (d_t + a d_x + b - eps d_x^2) y = 0,
// y(t,0) = h(t), y(t,L) = 0.
Trajectory solve_viscous_transport(const VectorField& field, double eps, double T,
                                   const Fn1& h, const std::vector<double>& y0,
                                   std::size_t n, const SolveOptions& opts = {});

// Free observation evolution (d_t - f' d_x - q - eps d_x^2) u = 0, Dirichlet 0.
Trajectory solve_observation(const VectorField& field, double eps, double T,
                             const std::vector<double>& u0, std::size_t n,
                             const SolveOptions& opts = {});

// | (u(T),y0) - (u0,y(T)) + int eps u_x(t,0) h(T-t) dt |, normalized by the
// largest of the three magnitudes.
double duality_residual(const Trajectory& u_traj, const Trajectory& y_traj,
                        const std::vector<double>& u0, const std::vector<double>& y0,
                        const Fn1& h);

struct GramianCost {
  LogVal C0;
  double log_C0 = 0.0;
  std::size_t K = 0;
  bool regularized = false;
};

// Observability constant restricted to the span of the first K modes:
// largest generalized eigenvalue of the (final mass, boundary flux) pencil.
GramianCost gramian_cost(const Spectrum& spec, const VectorField& field, double eps,
                         double T, std::size_t K_modes);

struct CostScan {
  std::vector<double> eps_list;
  std::vector<double> log_C0;
  double T = 0.0;
  std::size_t K_modes = 0;
  double rate = 0.0;        // slope of log C0 against 1/eps
  double intercept = 0.0;
  double r2 = 0.0;
  double band = 0.0;        // standard error of the slope
  bool reliable = true;     // false when r2 < 0.8
  double envelope_lower = 0.0;  // sup_E (G14 - E T)
  double envelope_upper = 0.0;  // min_m cost exponent
  double K_doubling_shift = 0.0;  // |log C0(2K) - log C0(K)| at the smallest eps
};

struct ExponentFit {
  double rate = 0.0;
  double band = 0.0;
  double r2 = 0.0;
  bool reliable = true;
};
ExponentFit exponent_fit(const std::vector<double>& eps_list,
                         const std::vector<double>& log_C0);

// Cost measurement across the eps grid; cells run in parallel.
CostScan cost_scan(const VectorField& field, const std::vector<double>& eps_list, double T,
                   std::size_t K_modes);
CostScan cost_scan_serial(const VectorField& field, const std::vector<double>& eps_list,
                          double T, std::size_t K_modes);

}  // namespace vvc
