#include "vvc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvc/linalg.hpp"
#include "vvc/parallel.hpp"
#include "vvc/util.hpp"

namespace vvc {

namespace {

// Crank-Nicolson stepper for d_t w = -(1/scale) Op w with tridiagonal Op and
// inhomogeneous Dirichlet value g(t) at x = 0.  `lower` is the coupling of an
// interior node to its left neighbor (so node 1 couples to the boundary).
struct Tridiag {
  std::vector<double> lower, diag, upper;  // size n (lower[0], upper[n-1] unused)
};

struct StepResult {
  std::vector<double> t_step, flux0;
  std::vector<double> t_snap;
  std::vector<std::vector<double>> snap;
  std::vector<double> final_state;
};

StepResult cn_evolve(const Tridiag& op, double scale, double h, double T, const Fn1& g,
                     std::vector<double> w, double dt, std::size_t n_snapshots) {
  const std::size_t n = op.diag.size();
  const double c = 0.5 * dt / scale;
  // factor (I + c Op) once: Thomas without pivoting (diagonally dominant here)
  std::vector<double> dl(n), dd(n), du(n);
  for (std::size_t i = 0; i < n; ++i) {
    dl[i] = c * op.lower[i];
    dd[i] = 1.0 + c * op.diag[i];
    du[i] = c * op.upper[i];
  }
  std::vector<double> cp(n), rhs(n);
  cp[0] = du[0] / dd[0];
  for (std::size_t i = 1; i < n; ++i) cp[i] = du[i] / (dd[i] - dl[i] * cp[i - 1]);

  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(T / dt)));
  const double dt_eff = T / static_cast<double>(steps);
  const double c_eff = 0.5 * dt_eff / scale;
  if (std::fabs(dt_eff - dt) > 1e-12 * dt) {
    // re-factor with the effective step
    for (std::size_t i = 0; i < n; ++i) {
      dl[i] = c_eff * op.lower[i];
      dd[i] = 1.0 + c_eff * op.diag[i];
      du[i] = c_eff * op.upper[i];
    }
    cp[0] = du[0] / dd[0];
    for (std::size_t i = 1; i < n; ++i) cp[i] = du[i] / (dd[i] - dl[i] * cp[i - 1]);
  }

  StepResult out;
  out.t_step.reserve(steps + 1);
  out.flux0.reserve(steps + 1);
  auto flux_at = [&](double t, const std::vector<double>& v) {
    const double g0 = g ? g(t) : 0.0;
    return (-3.0 * g0 + 4.0 * v[0] - v[1]) / (2.0 * h);
  };
  out.t_step.push_back(0.0);
  out.flux0.push_back(flux_at(0.0, w));

  std::vector<std::size_t> snap_at(n_snapshots);
  for (std::size_t s = 0; s < n_snapshots; ++s)
    snap_at[s] = (n_snapshots <= 1) ? steps : (s * steps) / (n_snapshots - 1);
  std::size_t snap_idx = 0;
  if (snap_at[0] == 0) {
    out.t_snap.push_back(0.0);
    out.snap.push_back(w);
    ++snap_idx;
  }

  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = dt_eff * static_cast<double>(k);
    const double t1 = dt_eff * static_cast<double>(k + 1);
    // rhs = (I - c Op) w - c lower[0] (g(t0)+g(t1)) e_0
    rhs[0] = (1.0 - c_eff * op.diag[0]) * w[0] - c_eff * op.upper[0] * w[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
      rhs[i] = -c_eff * op.lower[i] * w[i - 1] + (1.0 - c_eff * op.diag[i]) * w[i] -
               c_eff * op.upper[i] * w[i + 1];
    rhs[n - 1] = -c_eff * op.lower[n - 1] * w[n - 2] + (1.0 - c_eff * op.diag[n - 1]) * w[n - 1];
    if (g) {
      const double gsum = g(t0) + g(t1);
      rhs[0] -= c_eff * op.lower[0] * gsum;
    }
    // Thomas solve
    rhs[0] /= dd[0];
    for (std::size_t i = 1; i < n; ++i)
      rhs[i] = (rhs[i] - dl[i] * rhs[i - 1]) / (dd[i] - dl[i] * cp[i - 1]);
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
    w = rhs;
    out.t_step.push_back(t1);
    out.flux0.push_back(flux_at(t1, w));
    while (snap_idx < n_snapshots && snap_at[snap_idx] == k + 1) {
      out.t_snap.push_back(t1);
      out.snap.push_back(w);
      ++snap_idx;
    }
  }
  out.final_state = std::move(w);
  return out;
}

double dot_h(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * h;
}

}  // namespace

Trajectory solve_conjugated_heat(const OperatorDiscretization& disc, double T, const Fn1& g,
                                 const std::vector<double>& init, const SolveOptions& opts) {
  if (init.size() != disc.n)
    throw std::invalid_argument("solve_conjugated_heat: initial state size mismatch");
  Tridiag op;
  op.lower.assign(disc.n, disc.offdiag);
  op.upper.assign(disc.n, disc.offdiag);
  op.diag = disc.diag;
  const double dt = opts.dt > 0.0 ? opts.dt : disc.eps / 50.0;
  StepResult r = cn_evolve(op, disc.eps, disc.h, T, g, init, dt, opts.n_snapshots);

  Trajectory tr;
  tr.variable = 'v';
  tr.eps = disc.eps;
  tr.T = T;
  tr.x = disc.x;
  tr.t_snap = std::move(r.t_snap);
  tr.snap = std::move(r.snap);
  tr.t_step = std::move(r.t_step);
  tr.flux0 = std::move(r.flux0);
  for (double& f : tr.flux0) f *= disc.eps;  // record eps d_x
  tr.final_state = std::move(r.final_state);
  return tr;
}

Trajectory solve_viscous_transport(const VectorField& field, double eps, double T, const Fn1& h,
                                   const std::vector<double>& y0, std::size_t n,
                                   const SolveOptions& opts) {
  if (y0.size() != n) throw std::invalid_argument("solve_viscous_transport: y0 size mismatch");
  const double hx = field.L / static_cast<double>(n + 1);
  Tridiag op;
  op.lower.resize(n);
  op.diag.resize(n);
  op.upper.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = hx * static_cast<double>(i + 1);
    const double ai = field.a(x);
    const double bi = field.b(x);
    op.lower[i] = -ai / (2.0 * hx) - eps / (hx * hx);
    op.diag[i] = bi + 2.0 * eps / (hx * hx);
    op.upper[i] = ai / (2.0 * hx) - eps / (hx * hx);
  }
  const double dt = opts.dt > 0.0 ? opts.dt : eps / 50.0;
  StepResult r = cn_evolve(op, 1.0, hx, T, h, y0, dt, opts.n_snapshots);

  Trajectory tr;
  tr.variable = 'y';
  tr.eps = eps;
  tr.T = T;
  tr.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) tr.x[i] = hx * static_cast<double>(i + 1);
  tr.t_snap = std::move(r.t_snap);
  tr.snap = std::move(r.snap);
  tr.t_step = std::move(r.t_step);
  tr.flux0 = std::move(r.flux0);
  for (double& f : tr.flux0) f *= eps;
  tr.final_state = std::move(r.final_state);
  return tr;
}

Trajectory solve_observation(const VectorField& field, double eps, double T,
                             const std::vector<double>& u0, std::size_t n,
                             const SolveOptions& opts) {
  if (u0.size() != n) throw std::invalid_argument("solve_observation: u0 size mismatch");
  const double hx = field.L / static_cast<double>(n + 1);
  Tridiag op;
  op.lower.resize(n);
  op.diag.resize(n);
  op.upper.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = hx * static_cast<double>(i + 1);
    const double ai = field.a(x);
    const double qi = field.q(x);
    op.lower[i] = ai / (2.0 * hx) - eps / (hx * hx);
    op.diag[i] = -qi + 2.0 * eps / (hx * hx);
    op.upper[i] = -ai / (2.0 * hx) - eps / (hx * hx);
  }
  const double dt = opts.dt > 0.0 ? opts.dt : eps / 50.0;
  StepResult r = cn_evolve(op, 1.0, hx, T, nullptr, u0, dt, opts.n_snapshots);

  Trajectory tr;
  tr.variable = 'u';
  tr.eps = eps;
  tr.T = T;
  tr.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) tr.x[i] = hx * static_cast<double>(i + 1);
  tr.t_snap = std::move(r.t_snap);
  tr.snap = std::move(r.snap);
  tr.t_step = std::move(r.t_step);
  tr.flux0 = std::move(r.flux0);
  for (double& f : tr.flux0) f *= eps;
  tr.final_state = std::move(r.final_state);
  return tr;
}

double duality_residual(const Trajectory& u_traj, const Trajectory& y_traj,
                        const std::vector<double>& u0, const std::vector<double>& y0,
                        const Fn1& h) {
  if (u_traj.x.size() != y_traj.x.size() || std::fabs(u_traj.T - y_traj.T) > 1e-12)
    throw std::invalid_argument("duality_residual: mismatched grids or horizons");
  const double hx = u_traj.x[1] - u_traj.x[0];
  const double T = u_traj.T;
  const double a_term = dot_h(u_traj.final_state, y0, hx);
  const double b_term = dot_h(u0, y_traj.final_state, hx);
  // trapezoid of eps u_x(t,0) h(T-t) over the step record
  double integral = 0.0;
  const auto& ts = u_traj.t_step;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double f0 = u_traj.flux0[k] * h(T - ts[k]);
    const double f1 = u_traj.flux0[k + 1] * h(T - ts[k + 1]);
    integral += 0.5 * (f0 + f1) * (ts[k + 1] - ts[k]);
  }
  const double scale =
      std::max({std::fabs(a_term), std::fabs(b_term), std::fabs(integral), 1e-300});
  return std::fabs(a_term - b_term + integral) / scale;
}

GramianCost gramian_cost(const Spectrum& spec, const VectorField& field, double eps, double T,
                         std::size_t K_modes) {
  if (K_modes > spec.lambda.size())
    throw std::invalid_argument("gramian_cost: K_modes beyond computed spectrum");
  const std::size_t K = K_modes;
  const std::size_t nx = spec.x.size();
  const double h = spec.h;

  // weighted mass entries <e^{-f/eps} phi_j, phi_k>, max exponent factored out
  std::vector<double> wlog(nx);
  double wmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nx; ++i) {
    wlog[i] = -field.f(spec.x[i]) / eps;
    wmax = std::max(wmax, wlog[i]);
  }
  std::vector<double> wesc(nx);
  for (std::size_t i = 0; i < nx; ++i) wesc[i] = std::exp(wlog[i] - wmax);

  std::vector<LogVal> M(K * K), G(K * K);
  const double f0 = field.f(0.0);
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t k = j; k < K; ++k) {
      double m = 0.0;
      for (std::size_t i = 0; i < nx; ++i) m += wesc[i] * spec.phi[j][i] * spec.phi[k][i];
      m *= h;
      const double lam = spec.lambda[j] + spec.lambda[k];
      const LogVal mass = LogVal::from(m) * LogVal::exp_of(wmax - lam * T / eps);
      M[j * K + k] = M[k * K + j] = mass;
      const double one_minus = -std::expm1(-lam * T / eps);
      const LogVal flux = LogVal::from(spec.dphi0[j] * spec.dphi0[k] * one_minus * eps / lam) *
                          LogVal::exp_of(-f0 / eps);
      G[j * K + k] = G[k * K + j] = flux;
    }
  }

  double sM = -std::numeric_limits<double>::infinity();
  double sG = -std::numeric_limits<double>::infinity();
  for (const auto& v : M)
    if (v.sgn != 0) sM = std::max(sM, v.lg);
  for (const auto& v : G)
    if (v.sgn != 0) sG = std::max(sG, v.lg);

  Matrix Mh(K * K), Gh(K * K);
  for (std::size_t i = 0; i < K * K; ++i) {
    Mh[i] = (M[i].sgn == 0) ? 0.0 : M[i].sgn * std::exp(M[i].lg - sM);
    Gh[i] = (G[i].sgn == 0) ? 0.0 : G[i].sgn * std::exp(G[i].lg - sG);
  }

  GramianCost out;
  out.K = K;
  Matrix L;
  try {
    L = cholesky(Gh, K);
  } catch (const std::runtime_error&) {
    double tr = 0.0;
    for (std::size_t i = 0; i < K; ++i) tr += Gh[i * K + i];
    for (std::size_t i = 0; i < K; ++i) Gh[i * K + i] += 1e-14 * tr;
    L = cholesky(Gh, K);
    out.regularized = true;
  }
  // B = L^{-1} Mh L^{-T}
  Matrix B(K * K, 0.0);
  for (std::size_t col = 0; col < K; ++col) {
    std::vector<double> e(K);
    for (std::size_t r = 0; r < K; ++r) e[r] = Mh[r * K + col];
    // forward solve L y = column
    for (std::size_t i = 0; i < K; ++i) {
      double s = e[i];
      for (std::size_t k2 = 0; k2 < i; ++k2) s -= L[i * K + k2] * e[k2];
      e[i] = s / L[i * K + i];
    }
    for (std::size_t r = 0; r < K; ++r) B[r * K + col] = e[r];
  }
  // now solve on the right: B := B L^{-T} (i.e. solve rows)
  for (std::size_t row = 0; row < K; ++row) {
    std::vector<double> e(K);
    for (std::size_t c2 = 0; c2 < K; ++c2) e[c2] = B[row * K + c2];
    for (std::size_t i = 0; i < K; ++i) {
      double s = e[i];
      for (std::size_t k2 = 0; k2 < i; ++k2) s -= L[i * K + k2] * e[k2];
      e[i] = s / L[i * K + i];
    }
    for (std::size_t c2 = 0; c2 < K; ++c2) B[row * K + c2] = e[c2];
  }
  // symmetrize against round-off
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j2 = i + 1; j2 < K; ++j2) {
      const double s = 0.5 * (B[i * K + j2] + B[j2 * K + i]);
      B[i * K + j2] = B[j2 * K + i] = s;
    }
  std::vector<double> ev = jacobi_eigenvalues(B, K);
  const double mu = std::max(ev.back(), 1e-300);
  out.C0 = LogVal::exp_of(0.5 * (sM - sG + std::log(mu)));
  out.log_C0 = out.C0.lg;
  return out;
}

ExponentFit exponent_fit(const std::vector<double>& eps_list,
                         const std::vector<double>& log_C0) {
  if (eps_list.size() < 4)
    throw std::invalid_argument("exponent_fit: need at least 4 viscosity values");
  std::vector<double> inv(eps_list.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / eps_list[i];
  LineFit f = fit_line(inv, log_C0);
  ExponentFit out;
  out.rate = f.slope;
  out.band = f.slope_stderr;
  out.r2 = f.r2;
  out.reliable = f.r2 >= 0.8;
  return out;
}

namespace {

template <class Loop>
CostScan cost_scan_impl(const VectorField& field, const std::vector<double>& eps_list, double T,
                        std::size_t K_modes, Loop&& loop) {
  CostScan scan;
  scan.eps_list = eps_list;
  scan.T = T;
  scan.K_modes = K_modes;
  scan.log_C0.assign(eps_list.size(), 0.0);

  std::vector<double> log_C0_2K(eps_list.size(), 0.0);
  loop(eps_list.size(), [&](std::size_t i) {
    const double eps = eps_list[i];
    // resolve enough spectrum for 2K modes (for the doubling check)
    const std::size_t K2 = 2 * K_modes;
    // rough top-energy estimate from the flat-box count
    Potential pot = potential(field);
    const double lam_max = std::max(4.0 * pot.Vmax, pot.Vmax + sq(2.0 * K2 * eps / field.L));
    const std::size_t n = suggested_grid(field, eps, lam_max);
    OperatorDiscretization disc = discretize(field, eps, n);
    Spectrum spec = eigenpairs_serial(disc, std::min(K2, n / 4));
    scan.log_C0[i] = gramian_cost(spec, field, eps, T, K_modes).log_C0;
    log_C0_2K[i] = gramian_cost(spec, field, eps, T, std::min(K2, n / 4)).log_C0;
  });

  scan.K_doubling_shift = std::fabs(log_C0_2K.back() - scan.log_C0.back());

  ExponentFit fit = exponent_fit(eps_list, scan.log_C0);
  scan.rate = fit.rate;
  scan.band = fit.band;
  scan.r2 = fit.r2;
  scan.reliable = fit.reliable;

  BoundsContext ctx(field);
  const Potential& pot = ctx.pot();
  double env_lo = -std::numeric_limits<double>::infinity();
  for (double E : linspace(pot.E0, pot.Vmax, 128))
    env_lo = std::max(env_lo, ctx.G14(E) - E * T);
  scan.envelope_lower = env_lo;
  double env_hi = std::numeric_limits<double>::infinity();
  for (double m : linspace(0.0, 0.95, 40))
    env_hi = std::min(env_hi, cost_exponent_upper(ctx, T, m, 1e-6));
  scan.envelope_upper = env_hi;
  return scan;
}

}  // namespace

CostScan cost_scan(const VectorField& field, const std::vector<double>& eps_list, double T,
                   std::size_t K_modes) {
  return cost_scan_impl(field, eps_list, T, K_modes,
                        [](std::size_t n, auto&& f) { par::for_index(n, f); });
}

CostScan cost_scan_serial(const VectorField& field, const std::vector<double>& eps_list,
                          double T, std::size_t K_modes) {
  return cost_scan_impl(field, eps_list, T, K_modes,
                        [](std::size_t n, auto&& f) { par::for_index_serial(n, f); });
}

}  // namespace vvc
