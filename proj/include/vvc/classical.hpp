#pragma once

#include <utility>
#include <vector>

#include "vvc/field.hpp"
#include "vvc/spline.hpp"

namespace vvc {

// Phase-space volume Phi(E) of the classically allowed band below E.
double phase_volume(const Potential& pot, double E, double abs_tol = 1e-12);

// Closed-orbit quantity T(E); diverging integrand at the ground energy,
// so E must exceed E0.  The harmonic limit at E0 is exposed separately.
double period_integral(const Potential& pot, double E, double abs_tol = 1e-12);
double period_harmonic_limit(const Potential& pot);

struct SupPeriod {
  double T1 = 0.0;
  double arg_E = 0.0;
  bool tail_monotone = true;  // T decreasing beyond the barrier energy on samples
};
SupPeriod sup_period(const Potential& pot, double E_cap_factor = 50.0);

// Cached evaluator of Phi'(x) = T(x)/(4 sqrt(x)); split at the barrier energy
// where Phi' has a kink, asymptotic expansion beyond the cap.
class PhiPrime {
 public:
  PhiPrime(const Potential& pot, double E_cap);
  double operator()(double x) const;
  double cap() const { return E_cap_; }

 private:
  double E0_, barrier_, E_cap_;
  double tail_c0_, tail_c1_, tail_c2_;  // T(x) ~ c0 + c1/x + c2/x^2
  CubicSpline below_, above_;
};

// Interaction term between energy levels; log singularity at x = E split off,
// infinite tail integrated exactly under the substitution x = cap/t^2.
double interaction_time(const Potential& pot, const PhiPrime& dphi, double E, double B,
                        double abs_tol = 1e-9);
double interaction_time(const Potential& pot, double E, double B);  // builds the cache

// Closed form of the wedge integral, continuous extension at beta = 1.
double gamma0(double alpha, double beta);

struct Kappa0 {
  double value = 0.0;
  double alpha = 1.0, beta = 1.0;
};
// max of gamma0(alpha,beta)/(alpha^2+beta^2) over {alpha >= beta >= 1}, scaled.
Kappa0 kappa0(std::size_t n_alpha = 160, std::size_t n_beta = 80);

struct ClassicalTable {
  std::vector<double> E, phi, period, calT;  // calT = T/(2 sqrt(E))
  double T1 = 0.0, T1_arg = 0.0;
  double E_cap = 0.0;
};

// Tabulates (E, Phi, T, calT); the energy loop is the OpenMP kernel,
// build_table_serial is the reference implementation kept for testing.
ClassicalTable build_table(const Potential& pot, std::size_t n_energies = 400,
                           double E_cap_factor = 50.0);
ClassicalTable build_table_serial(const Potential& pot, std::size_t n_energies = 400,
                                  double E_cap_factor = 50.0);

// Monotone inversion of the tabulated Phi with local root polish.
double invert_phase_volume(const Potential& pot, const ClassicalTable& table, double target);

}  // namespace vvc
