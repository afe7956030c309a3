#pragma once

#include <memory>
#include <vector>

#include "vvc/field.hpp"
#include "vvc/logval.hpp"
#include "vvc/quadrature.hpp"
#include "vvc/spectral.hpp"

namespace vvc {

// Gevrey window a(t) = exp(-alpha(1/t + 1/(T-t))) with exact rational
// recurrences for its derivatives: a^(j) = R_j(1/t, 1/(T-t)) a with the R_j
// maintained as polynomial coefficient tables.
class GevreyWeight {
 public:
  GevreyWeight(double alpha, double T, int j_cap = 60);

  double alpha() const { return alpha_; }
  double horizon() const { return T_; }
  int j_cap() const { return j_cap_; }

  double log_value(double t) const;  // log a(t); -inf outside (0,T)
  double value(double t) const;
  double derivative(double t, int j) const;  // a^(j)(t); flat 0 outside (0,T)

  // All ratios a^(j)/a for j = 0..j_max at a fixed t (long double precision).
  void ratios(double t, int j_max, std::vector<long double>& out) const;

 private:
  double alpha_, T_;
  int j_cap_;
  // coefficient table of P_j for exp(-alpha/t); the (T-t) factor uses (-1)^j P_j
  std::vector<std::vector<long double>> poly_;
  std::vector<std::vector<long double>> binom_;
};

// Spec'd single-value entry point.
double gevrey_derivative(double alpha, double T, double t, int j);

struct KernelValue {
  LogVal k;
  bool converged = true;
  int terms = 0;
};

// Transmutation kernel k_T(t,s) = sum_j (-1)^j a^(j)(t) s^(2j+1)/(2j+1)!.
// Valid for |s| <= S_guard < sqrt(2 alpha).
class HeatKernel {
 public:
  HeatKernel(double alpha, double T, double S_guard, int j_cap = 60);

  double value(double t, double s) const;  // 0 on clean underflow
  KernelValue evaluate(double t, double s) const;
  // one series pass per t shared across many s (used by the w_n integrals)
  void evaluate_row(double t, const std::vector<double>& s, std::vector<LogVal>& out,
                    bool* all_converged = nullptr) const;

  // right side of the pointwise kernel bound at parameter delta in (0,1)
  double bound_log(double t, double s, double delta) const;

  const GevreyWeight& weight() const { return weight_; }
  double guard() const { return S_guard_; }

 private:
  GevreyWeight weight_;
  double S_guard_;
  int j_cap_;
  std::vector<long double> inv_fact_;  // 1/(2j+1)!
};

double heat_kernel(double alpha, double T, double t, double s, int J = 60);

// Biorthogonal family to sin(beta_n s) on (-S,S) via the Gram system.
struct SineFamily {
  std::vector<double> betas;
  double S = 0.0;
  std::size_t N = 0;
  std::vector<double> Ginv;      // N x N row-major
  double cond = 0.0;             // condition number of the Gram matrix
  double solve_residual = 0.0;   // max |G Ginv - I|
  MappedQuad squad;              // nodes on (0,S]; integrands here are even

  double v_eval(std::size_t n, double s) const;
  // integral of v_n(s) sin(beta s) over (-S,S) by quadrature
  double pair_with_sin(std::size_t n, double beta) const;
};

SineFamily sine_biorthogonal(const std::vector<double>& betas, double S, std::size_t N_trunc);

// Family biorthogonal to exp(-beta_l^2 t) on (0,T):
//   w_n(t) = int k_T(t,s) v_n(s) ds,  u_n = w_n / c_n.
struct BiorthogonalFamily {
  SineFamily sine;
  double T = 0.0, S = 0.0, alpha = 0.0;
  std::size_t N = 0;
  std::vector<double> betas;
  std::vector<LogVal> c;          // normalizers c_l
  std::shared_ptr<HeatKernel> kernel;
  std::vector<double> residual;   // N x N, exp-biorthogonality residual
  double max_residual = 0.0;

  LogVal c_of(double beta) const;             // normalizer for an arbitrary beta
  LogVal w_value(std::size_t n, double t) const;
  LogVal u_value(std::size_t n, double t) const;
  // moment of u_n against exp(-beta^2 t), via the flat-window reduction
  LogVal moment(std::size_t n, double beta) const;
};

BiorthogonalFamily exp_biorthogonal(const std::vector<double>& betas, double T, double S,
                                    double alpha, std::size_t N_trunc);

struct ControlOptions {
  double delta_gap = 0.5;    // slack in the gap window S = (T1 + delta)/2
  double eps_prime = 0.05;   // alpha = 2 S^2 (1 + eps_prime)
  std::size_t nt_out = 2049; // output samples over the active phase
  double cond_limit = 1e12;
};

struct ControlSignal {
  std::vector<double> t_grid;   // on [0,T]
  std::vector<double> h;        // boundary control values
  std::vector<LogVal> h_log;
  double m = 0.0;               // dissipation fraction (h = 0 on [0, mT])
  double T_total = 0.0;
  double eps = 0.0;
  std::size_t N_trunc = 0;
  LogVal norm_sq;               // ||h||^2_{L2(0,T)}
  LogVal predicted_bound_noC;   // cost-bound right side, constant stripped
  // synthesis internals, kept for the modal verification
  std::vector<LogVal> alpha_coeffs;
  std::shared_ptr<BiorthogonalFamily> family;
  double tau = 0.0;             // active-phase length (1-m) T
};

// Two-phase null control: free decay on [0,mT], moment control on [mT,T].
ControlSignal synthesize_control(const Spectrum& spec, const VectorField& field, double eps,
                                 double T, double m, const std::vector<double>& v0_coeffs,
                                 std::size_t N_trunc, double T1,
                                 const ControlOptions& opts = {});

struct ModalResidual {
  std::vector<LogVal> final_coeff;  // post-control modal coefficients
  std::vector<LogVal> free_coeff;   // free decay at T, for scale
  double l2_residual_vs_init = 0.0;
  double max_rel_vs_free = 0.0;     // over the controlled block
};

ModalResidual verify_control_modal(const Spectrum& spec, const VectorField& field, double eps,
                                   const ControlSignal& sig,
                                   const std::vector<double>& v0_coeffs);

}  // namespace vvc
