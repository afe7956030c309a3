#pragma once

#include <cstddef>
#include <vector>

#include "vvc/classical.hpp"
#include "vvc/field.hpp"

namespace vvc {

// Symmetric tridiagonal Dirichlet discretization of
//   -eps^2 d^2/dx^2 + V + eps q_f
// on n interior nodes, mesh h = L/(n+1).
struct OperatorDiscretization {
  double eps = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  double L = 0.0;
  std::vector<double> x;     // interior nodes
  std::vector<double> diag;  // 2 eps^2/h^2 + V + eps q_f
  double offdiag = 0.0;      // -eps^2/h^2
  bool qf_zero = true;
  bool under_resolved = false;  // h > eps/4
};

OperatorDiscretization discretize(const VectorField& field, double eps, std::size_t n);

// Mesh size rule: h <= eps/8 and fine enough that the O(h^2) eigenvalue error
// stays below the semiclassical band width at lambda_max.
std::size_t suggested_grid(const VectorField& field, double eps, double lambda_max);

struct Spectrum {
  double eps = 0.0;
  double L = 0.0;
  double h = 0.0;
  std::vector<double> x;                  // interior nodes
  std::vector<double> lambda;             // ascending
  std::vector<double> beta;               // sqrt(lambda)
  std::vector<double> gap;                // beta[k+1] - beta[k]
  std::vector<std::vector<double>> phi;   // L2(h)-normalized, phi'(0) > 0
  std::vector<double> dphi0, dphiL;       // eps * one-sided derivative
};

// First k_max eigenpairs by Sturm bisection + inverse iteration.  The
// per-eigenvalue loop is the OpenMP kernel; the _serial variant is the
// reference implementation kept for testing.
Spectrum eigenpairs(const OperatorDiscretization& disc, std::size_t k_max);
Spectrum eigenpairs_serial(const OperatorDiscretization& disc, std::size_t k_max);

// Eigenvalues only (used by benchmarks and convergence checks).
std::vector<double> eigenvalues_bisect(const OperatorDiscretization& disc, std::size_t k_max,
                                       bool parallel);

struct WeylReport {
  double D_fit = 0.0;   // max_k |Phi(lambda_k) - eps pi k| / eps
  double C_fit = 0.0;   // residual beyond the Phi band, in units of eps^{3/2}
  int band_violations = 0;
  std::size_t k_used = 0;       // eigenvalues below the table cap
  std::size_t k_excluded = 0;   // eigenvalues above the cap (warned)
  std::vector<double> D_k;
};

WeylReport weyl_check(const Spectrum& spec, const Potential& pot, const ClassicalTable& table,
                      double eps);

struct GapReport {
  std::size_t N_obs = 0;        // first index from which the asymptotic gap holds
  double gamma_obs = 0.0;       // min gap / eps over all levels
  double gamma2_obs = 0.0;      // min lambda-gap / eps
  double asymptotic_bound = 0.0;  // 2 pi eps / (T1 + delta)
  std::vector<double> mid_ratio;  // gap_k T(lambda_k) / (2 pi eps), mid-band k
};

GapReport gap_check(const Spectrum& spec, const Potential& pot, double T1, double eps,
                    double delta);

struct LocalizationEntry {
  std::size_t k = 0;
  double E = 0.0;
  double slope = 0.0;      // regression of -eps log|phi| against d_{A,E}
  double r2 = 0.0;
  double flux0 = 0.0;      // eps |phi'(0)| / sqrt(E+1)
  double dA0 = 0.0;        // d_{A,E}(0)
  double delta_flux = 0.0; // | -eps log flux0 - dA0 |
  std::size_t points = 0;
  bool floor_hit = false;  // some grid values were below the 1e-300 floor
};

struct LocalizationReport {
  std::vector<LocalizationEntry> entries;
  double delta_obs = 0.0;  // max over entries of delta_flux
};

LocalizationReport localization_check(const Spectrum& spec, const VectorField& field,
                                      double eps, const std::vector<std::size_t>& k_set);

}  // namespace vvc
