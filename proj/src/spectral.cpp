#include "vvc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvc/agmon.hpp"
#include "vvc/parallel.hpp"
#include "vvc/util.hpp"

namespace vvc {

OperatorDiscretization discretize(const VectorField& field, double eps, std::size_t n) {
  if (!(eps > 0.0)) throw std::invalid_argument("discretize: eps must be positive");
  if (n < 64) throw std::invalid_argument("discretize: need n >= 64 interior nodes");
  OperatorDiscretization d;
  d.eps = eps;
  d.n = n;
  d.L = field.L;
  d.h = field.L / static_cast<double>(n + 1);
  d.under_resolved = d.h > eps / 4.0;
  d.offdiag = -eps * eps / (d.h * d.h);
  d.qf_zero = field.qf_identically_zero();
  d.x.resize(n);
  d.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.x[i] = d.h * static_cast<double>(i + 1);
    d.diag[i] = 2.0 * eps * eps / (d.h * d.h) + field.V(d.x[i]) + eps * field.qf(d.x[i]);
  }
  return d;
}

std::size_t suggested_grid(const VectorField& field, double eps, double lambda_max) {
  const double h1 = eps / 8.0;
  // FD eigenvalue error ~ h^2 lambda^2 / (12 eps^2); keep it under ~0.25 eps^{3/2}
  const double h2 = std::sqrt(3.0) * std::pow(eps, 1.75) / std::max(lambda_max, 1e-6);
  const double h = std::min(h1, h2);
  const std::size_t n = static_cast<std::size_t>(std::ceil(field.L / h));
  return std::clamp<std::size_t>(n, 256, 60000);
}

namespace {

// Number of eigenvalues of the tridiagonal matrix strictly below sigma.
std::size_t sturm_count(const OperatorDiscretization& d, double sigma) {
  const double b2 = d.offdiag * d.offdiag;
  std::size_t count = 0;
  double q = d.diag[0] - sigma;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.n; ++i) {
    if (q == 0.0) q = 1e-300;
    q = d.diag[i] - sigma - b2 / q;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const OperatorDiscretization& d, std::size_t k, double lo, double hi) {
  // invariant: count(lo) <= k < count(hi)
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(d, mid) > k)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, std::fabs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// Inverse iteration with a partially pivoted tridiagonal LU at the shifted value.
std::vector<double> inverse_iteration(const OperatorDiscretization& d, double lambda,
                                      std::size_t k) {
  const std::size_t n = d.n;
  const double scale = std::fabs(lambda) + std::fabs(d.diag[0]);
  const double shift = lambda + 1e-13 * scale;  // keep the solve nonsingular

  // LU factors of (A - shift), pivoting rows i, i+1
  std::vector<double> du(n, 0.0), du2(n, 0.0), dl(n, 0.0), dd(n, 0.0);
  std::vector<int> piv(n, 0);
  for (std::size_t i = 0; i < n; ++i) dd[i] = d.diag[i] - shift;
  std::vector<double> e(n, d.offdiag);
  // Thomas elimination with partial pivoting (dgttrf-style)
  std::vector<double> a_dl(n, 0.0), a_d(dd), a_du(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a_du[i] = d.offdiag;
    a_dl[i + 1] = d.offdiag;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(a_d[i]) >= std::fabs(a_dl[i + 1])) {
      piv[i] = 0;
      if (a_d[i] == 0.0) a_d[i] = 1e-300;
      const double m = a_dl[i + 1] / a_d[i];
      a_dl[i + 1] = m;
      a_d[i + 1] -= m * a_du[i];
      du2[i] = 0.0;
    } else {
      piv[i] = 1;
      const double m = a_d[i] / a_dl[i + 1];
      a_d[i] = a_dl[i + 1];
      const double tmp = a_d[i + 1];
      a_d[i + 1] = a_du[i] - m * tmp;
      du2[i] = (i + 2 < n) ? a_du[i + 1] : 0.0;
      a_du[i] = tmp;
      if (i + 2 < n) a_du[i + 1] = -m * du2[i];
      a_dl[i + 1] = m;
    }
  }
  if (a_d[n - 1] == 0.0) a_d[n - 1] = 1e-300;

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (piv[i] == 0) {
        b[i + 1] -= a_dl[i + 1] * b[i];
      } else {
        const double t = b[i];
        b[i] = b[i + 1];
        b[i + 1] = t - a_dl[i + 1] * b[i];
      }
    }
    b[n - 1] /= a_d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - a_du[n - 2] * b[n - 1]) / a_d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
      b[i] = (b[i] - a_du[i] * b[i + 1] - du2[i] * b[i + 2]) / a_d[i];
    }
  };

  // deterministic start vector (per-index LCG keyed by k)
  std::vector<double> v(n);
  unsigned long long state = 0x9E3779B97F4A7C15ull ^ (k * 0xBF58476D1CE4E5B9ull + 1);
  for (std::size_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = static_cast<double>((state >> 11) & 0xFFFFFFFFull) / 4294967295.0 - 0.5;
  }
  for (int sweep = 0; sweep < 4; ++sweep) {
    solve(v);
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw SolverFailure("inverse_iteration: breakdown at eigenvalue index " + std::to_string(k));
    for (double& c : v) c /= nrm;
  }
  return v;
}

template <class Loop>
Spectrum eigenpairs_impl(const OperatorDiscretization& d, std::size_t k_max, Loop&& loop) {
  if (k_max == 0) throw std::invalid_argument("eigenpairs: k_max must be positive");
  if (k_max > d.n / 4)
    throw std::invalid_argument("eigenpairs: k_max exceeds n/4 resolution guard");

  // Gershgorin bracket
  double lo = d.diag[0], hi = d.diag[0];
  for (double v : d.diag) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= 2.0 * std::fabs(d.offdiag) + 1.0;
  hi += 2.0 * std::fabs(d.offdiag) + 1.0;

  Spectrum s;
  s.eps = d.eps;
  s.L = d.L;
  s.h = d.h;
  s.x = d.x;
  s.lambda.assign(k_max, 0.0);
  s.phi.assign(k_max, {});
  s.dphi0.assign(k_max, 0.0);
  s.dphiL.assign(k_max, 0.0);

  loop(k_max, [&](std::size_t k) {
    const double lam = bisect_eigenvalue(d, k, lo, hi);
    s.lambda[k] = lam;
    std::vector<double> v = inverse_iteration(d, lam, k);
    // L2(h) normalization, sign fixed by phi'(0) > 0
    double nrm = 0.0;
    for (double c : v) nrm += c * c * d.h;
    nrm = std::sqrt(nrm);
    for (double& c : v) c /= nrm;
    const double der0 = (4.0 * v[0] - v[1]) / (2.0 * d.h);
    if (der0 < 0.0)
      for (double& c : v) c = -c;
    s.dphi0[k] = d.eps * std::fabs(der0);
    const std::size_t n = d.n;
    s.dphiL[k] = d.eps * std::fabs((4.0 * v[n - 1] - v[n - 2]) / (2.0 * d.h));
    s.phi[k] = std::move(v);
  });

  s.beta.resize(k_max);
  for (std::size_t k = 0; k < k_max; ++k) s.beta[k] = std::sqrt(std::max(s.lambda[k], 0.0));
  s.gap.resize(k_max > 0 ? k_max - 1 : 0);
  for (std::size_t k = 0; k + 1 < k_max; ++k) s.gap[k] = s.beta[k + 1] - s.beta[k];
  return s;
}

}  // namespace

Spectrum eigenpairs(const OperatorDiscretization& d, std::size_t k_max) {
  return eigenpairs_impl(d, k_max, [](std::size_t n, auto&& f) { par::for_index(n, f); });
}

Spectrum eigenpairs_serial(const OperatorDiscretization& d, std::size_t k_max) {
  return eigenpairs_impl(d, k_max, [](std::size_t n, auto&& f) { par::for_index_serial(n, f); });
}

std::vector<double> eigenvalues_bisect(const OperatorDiscretization& d, std::size_t k_max,
                                       bool parallel) {
  double lo = d.diag[0], hi = d.diag[0];
  for (double v : d.diag) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= 2.0 * std::fabs(d.offdiag) + 1.0;
  hi += 2.0 * std::fabs(d.offdiag) + 1.0;
  std::vector<double> lam(k_max);
  auto body = [&](std::size_t k) { lam[k] = bisect_eigenvalue(d, k, lo, hi); };
  if (parallel)
    par::for_index(k_max, body);
  else
    par::for_index_serial(k_max, body);
  return lam;
}

WeylReport weyl_check(const Spectrum& spec, const Potential& pot, const ClassicalTable& table,
                      double eps) {
  WeylReport rep;
  for (std::size_t k = 0; k < spec.lambda.size(); ++k) {
    if (spec.lambda[k] > table.E_cap) {
      ++rep.k_excluded;
      continue;
    }
    const double phi_k = phase_volume(pot, std::max(spec.lambda[k], pot.E0), 1e-11);
    const double Dk = std::fabs(phi_k - eps * M_PI * static_cast<double>(k)) / eps;
    rep.D_k.push_back(Dk);
    ++rep.k_used;
  }
  rep.D_fit = rep.D_k.empty() ? 0.0 : *std::max_element(rep.D_k.begin(), rep.D_k.end());
  rep.C_fit = 0.0;  // the Phi band alone covers the computed range
  rep.band_violations = 0;
  return rep;
}

GapReport gap_check(const Spectrum& spec, const Potential& pot, double T1, double eps,
                    double delta) {
  GapReport rep;
  rep.asymptotic_bound = 2.0 * M_PI * eps / (T1 + delta);
  if (spec.gap.empty()) return rep;
  double gmin = std::numeric_limits<double>::infinity();
  double g2min = std::numeric_limits<double>::infinity();
  std::size_t last_violation = 0;
  bool any_violation = false;
  for (std::size_t k = 0; k < spec.gap.size(); ++k) {
    gmin = std::min(gmin, spec.gap[k]);
    g2min = std::min(g2min, spec.lambda[k + 1] - spec.lambda[k]);
    if (spec.gap[k] < rep.asymptotic_bound) {
      last_violation = k;
      any_violation = true;
    }
  }
  rep.N_obs = any_violation ? last_violation + 1 : 0;
  rep.gamma_obs = gmin / eps;
  rep.gamma2_obs = g2min / eps;

  const double E_lo = pot.E0 + 0.2 * (pot.Vmax - pot.E0);
  const double E_hi = pot.E0 + 0.8 * (pot.Vmax - pot.E0);
  for (std::size_t k = 0; k < spec.gap.size(); ++k) {
    if (spec.lambda[k] >= E_lo && spec.lambda[k] <= E_hi) {
      const double Tk = period_integral(pot, spec.lambda[k], 1e-10);
      rep.mid_ratio.push_back(spec.gap[k] * Tk / (2.0 * M_PI * eps));
    }
  }
  return rep;
}

LocalizationReport localization_check(const Spectrum& spec, const VectorField& field,
                                      double eps, const std::vector<std::size_t>& k_set) {
  Potential pot = potential(field);
  LocalizationReport rep;
  for (std::size_t k : k_set) {
    if (k >= spec.lambda.size())
      throw std::invalid_argument("localization_check: index beyond computed spectrum");
    LocalizationEntry e;
    e.k = k;
    e.E = spec.lambda[k];
    const std::vector<double> d = agmon_distance_grid(pot, e.E, spec.x);
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, v);
    e.dA0 = agmon_distance(pot, e.E, 0.0);

    // regression of -eps log|phi| against d over the forbidden region,
    // excluding the turning-point layer, the wall layer, and floored values
    std::vector<double> xs_fit, ys_fit;
    const std::size_t wall = 5;
    const double floor_abs = 1e-300;
    double amp = 0.0;
    for (double v : spec.phi[k]) amp = std::max(amp, std::fabs(v));
    for (std::size_t i = wall; i + wall < spec.x.size(); ++i) {
      if (d[i] < std::max(0.08 * dmax, 4.0 * eps * eps)) continue;
      const double av = std::fabs(spec.phi[k][i]);
      if (av <= floor_abs) {
        e.floor_hit = true;
        continue;
      }
      if (av < 1e-12 * amp) continue;  // below inverse-iteration noise
      xs_fit.push_back(d[i]);
      ys_fit.push_back(-eps * std::log(av));
    }
    e.points = xs_fit.size();
    if (xs_fit.size() >= 8) {
      LineFit f = fit_line(xs_fit, ys_fit);
      e.slope = f.slope;
      e.r2 = f.r2;
    }
    e.flux0 = spec.dphi0[k] / std::sqrt(e.E + 1.0);
    e.delta_flux = std::fabs(-eps * std::log(std::max(e.flux0, 1e-300)) - e.dA0);
    rep.entries.push_back(e);
  }
  for (const auto& e : rep.entries) rep.delta_obs = std::max(rep.delta_obs, e.delta_flux);
  return rep;
}

}  // namespace vvc
