#include "vvc/moment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvc/linalg.hpp"
#include "vvc/parallel.hpp"
#include "vvc/rootfind.hpp"
#include "vvc/util.hpp"

namespace vvc {

namespace {

// shift-and-sum of signed log values against weights
LogVal logval_dot(const std::vector<LogVal>& vals, const std::vector<double>& weights) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i].sgn != 0 && weights[i] != 0.0)
      m = std::max(m, vals[i].lg + std::log(std::fabs(weights[i])));
  if (m == -std::numeric_limits<double>::infinity()) return LogVal::zero();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].sgn == 0 || weights[i] == 0.0) continue;
    const double lw = std::log(std::fabs(weights[i]));
    const double sg = vals[i].sgn * (weights[i] > 0 ? 1 : -1);
    acc += sg * std::exp(vals[i].lg + lw - m);
  }
  if (acc == 0.0L) return LogVal::zero();
  return LogVal(m + static_cast<double>(std::log(std::fabs(static_cast<double>(acc)))),
                acc > 0 ? 1 : -1);
}

}  // namespace

GevreyWeight::GevreyWeight(double alpha, double T, int j_cap)
    : alpha_(alpha), T_(T), j_cap_(j_cap) {
  if (!(alpha > 0.0) || !(T > 0.0)) throw std::invalid_argument("GevreyWeight: alpha,T > 0");
  if (j_cap < 1 || j_cap > 200) throw std::invalid_argument("GevreyWeight: j_cap out of range");
  // P_0 = 1; P_{j+1}(u) = u^2 (alpha P_j - P_j'), coefficients ascending in u.
  poly_.resize(j_cap_ + 1);
  poly_[0] = {1.0L};
  for (int j = 0; j < j_cap_; ++j) {
    const auto& p = poly_[j];
    std::vector<long double> q(p.size() + 2, 0.0L);
    for (std::size_t k = 0; k < p.size(); ++k) {
      q[k + 2] += static_cast<long double>(alpha_) * p[k];            // u^2 alpha P
      if (k >= 1) q[k + 1] -= static_cast<long double>(k) * p[k];     // -u^2 P'
    }
    poly_[j + 1] = std::move(q);
  }
  binom_.resize(j_cap_ + 1);
  for (int j = 0; j <= j_cap_; ++j) {
    binom_[j].resize(j + 1);
    binom_[j][0] = binom_[j][j] = 1.0L;
    for (int i = 1; i < j; ++i) binom_[j][i] = binom_[j - 1][i - 1] + binom_[j - 1][i];
  }
}

double GevreyWeight::log_value(double t) const {
  if (!(t > 0.0) || !(t < T_)) return -std::numeric_limits<double>::infinity();
  return -alpha_ * (1.0 / t + 1.0 / (T_ - t));
}

double GevreyWeight::value(double t) const {
  const double lg = log_value(t);
  return lg == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lg);
}

void GevreyWeight::ratios(double t, int j_max, std::vector<long double>& out) const {
  if (j_max > j_cap_) throw std::domain_error("GevreyWeight: derivative order beyond j_cap");
  const long double u = 1.0L / static_cast<long double>(t);
  const long double v = 1.0L / static_cast<long double>(T_ - t);
  // Horner values P_i(u), P_i(v)
  std::vector<long double> Pu(j_max + 1), Pv(j_max + 1);
  for (int i = 0; i <= j_max; ++i) {
    const auto& p = poly_[i];
    long double su = 0.0L, sv = 0.0L;
    for (std::size_t k = p.size(); k-- > 0;) {
      su = su * u + p[k];
      sv = sv * v + p[k];
    }
    Pu[i] = su;
    Pv[i] = sv;
  }
  out.assign(j_max + 1, 0.0L);
  for (int j = 0; j <= j_max; ++j) {
    long double acc = 0.0L, comp = 0.0L;  // Kahan
    for (int i = 0; i <= j; ++i) {
      const long double sign = ((j - i) % 2 == 0) ? 1.0L : -1.0L;
      const long double term = binom_[j][i] * Pu[i] * sign * Pv[j - i];
      const long double y = term - comp;
      const long double tsum = acc + y;
      comp = (tsum - acc) - y;
      acc = tsum;
    }
    out[j] = acc;
  }
}

double GevreyWeight::derivative(double t, int j) const {
  if (j < 0) throw std::invalid_argument("GevreyWeight::derivative: j >= 0");
  if (j > j_cap_) throw std::domain_error("GevreyWeight::derivative: order beyond j_cap");
  if (!(t > 0.0) || !(t < T_)) return 0.0;  // flat extension
  std::vector<long double> r;
  ratios(t, j, r);
  const double lg = log_value(t);
  const long double val = r[j] * std::exp(static_cast<long double>(lg));
  return static_cast<double>(val);
}

double gevrey_derivative(double alpha, double T, double t, int j) {
  GevreyWeight w(alpha, T, std::max(j, 1));
  return w.derivative(t, j);
}

HeatKernel::HeatKernel(double alpha, double T, double S_guard, int j_cap)
    : weight_(alpha, T, j_cap), S_guard_(S_guard), j_cap_(j_cap) {
  if (!(S_guard > 0.0) || !(S_guard * S_guard < 2.0 * alpha))
    throw std::domain_error("HeatKernel: need S_guard^2 < 2 alpha");
  inv_fact_.resize(j_cap_ + 1);
  long double f = 1.0L;  // (2j+1)!
  for (int j = 0; j <= j_cap_; ++j) {
    if (j > 0) f *= static_cast<long double>(2 * j) * static_cast<long double>(2 * j + 1);
    inv_fact_[j] = 1.0L / f;
  }
}

void HeatKernel::evaluate_row(double t, const std::vector<double>& s, std::vector<LogVal>& out,
                              bool* all_converged) const {
  out.assign(s.size(), LogVal::zero());
  if (all_converged) *all_converged = true;
  const double A = weight_.log_value(t);
  if (A == -std::numeric_limits<double>::infinity()) return;

  std::vector<long double> R;
  weight_.ratios(t, j_cap_, R);

  for (std::size_t is = 0; is < s.size(); ++is) {
    const double sv = s[is];
    if (std::fabs(sv) > S_guard_ * (1.0 + 1e-12))
      throw std::domain_error("HeatKernel: |s| beyond the series guard");
    const long double s2 = static_cast<long double>(sv) * sv;
    long double spow = sv;  // s^{2j+1}
    long double sum = 0.0L, peak = 0.0L;
    bool converged = false;
    int small_run = 0;
    int j = 0;
    for (; j <= j_cap_; ++j) {
      const long double term = (j % 2 == 0 ? 1.0L : -1.0L) * R[j] * spow * inv_fact_[j];
      sum += term;
      peak = std::max(peak, fabsl(sum));
      const long double at = fabsl(term);
      if (j >= 2 && at <= 1e-14L * std::max(peak, 1e-300L)) {
        if (++small_run >= 2) {
          converged = true;
          break;
        }
      } else {
        small_run = 0;
      }
      spow *= s2;
    }
    if (!converged && all_converged) *all_converged = false;
    if (sum == 0.0L) continue;
    const double mant_log = static_cast<double>(logl(fabsl(sum)));
    out[is] = LogVal(A + mant_log, sum > 0 ? 1 : -1);
  }
}

KernelValue HeatKernel::evaluate(double t, double s) const {
  std::vector<LogVal> row;
  bool ok = true;
  evaluate_row(t, {s}, row, &ok);
  KernelValue kv;
  kv.k = row[0];
  kv.converged = ok;
  return kv;
}

double HeatKernel::value(double t, double s) const { return evaluate(t, s).k.value(); }

double HeatKernel::bound_log(double t, double s, double delta) const {
  const double T = weight_.horizon();
  if (!(t > 0.0) || !(t < T)) return -std::numeric_limits<double>::infinity();
  const double m = std::min(t, T - t);
  return std::log(std::max(std::fabs(s), 1e-300)) +
         (s * s / delta - weight_.alpha() / (1.0 + delta)) / m;
}

double heat_kernel(double alpha, double T, double t, double s, int J) {
  const double guard = std::nextafter(std::sqrt(2.0 * alpha), 0.0);
  HeatKernel k(alpha, T, std::min(guard, std::fabs(s) + 1.0), J);
  return k.value(t, s);
}

double SineFamily::v_eval(std::size_t n, double s) const {
  double acc = 0.0;
  for (std::size_t m = 0; m < N; ++m) acc += Ginv[n * N + m] * std::sin(betas[m] * s);
  return acc;
}

double SineFamily::pair_with_sin(std::size_t n, double beta) const {
  // both factors odd: integral over (-S,S) = 2 * integral over (0,S)
  double acc = 0.0;
  for (std::size_t i = 0; i < squad.x.size(); ++i)
    acc += squad.w[i] * v_eval(n, squad.x[i]) * std::sin(beta * squad.x[i]);
  return 2.0 * acc;
}

SineFamily sine_biorthogonal(const std::vector<double>& betas, double S, std::size_t N_trunc) {
  if (N_trunc > betas.size())
    throw std::invalid_argument("sine_biorthogonal: N_trunc beyond supplied frequencies");
  if (!(S > 0.0)) throw std::invalid_argument("sine_biorthogonal: S must be positive");
  for (std::size_t i = 0; i + 1 < N_trunc; ++i)
    if (!(betas[i + 1] > betas[i]))
      throw std::invalid_argument("sine_biorthogonal: frequencies must increase");
  if (!(betas[0] > 0.0)) throw std::invalid_argument("sine_biorthogonal: frequencies must be > 0");

  SineFamily fam;
  fam.S = S;
  fam.N = N_trunc;
  fam.betas.assign(betas.begin(), betas.begin() + N_trunc);

  // closed-form Gram entries on (-S,S)
  Matrix G(N_trunc * N_trunc, 0.0);
  for (std::size_t i = 0; i < N_trunc; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double g;
      const double bp = fam.betas[i] + fam.betas[j];
      if (i == j) {
        g = S - std::sin(2.0 * fam.betas[i] * S) / (2.0 * fam.betas[i]);
      } else {
        const double bm = fam.betas[i] - fam.betas[j];
        g = std::sin(bm * S) / bm - std::sin(bp * S) / bp;
      }
      G[i * N_trunc + j] = G[j * N_trunc + i] = g;
    }
  }

  std::vector<double> ev = jacobi_eigenvalues(G, N_trunc);
  if (!(ev.front() > 0.0))
    throw IllConditionedFamily("sine_biorthogonal: Gram matrix not positive definite");
  fam.cond = ev.back() / ev.front();
  if (fam.cond > 1e12)
    throw IllConditionedFamily(
        "sine_biorthogonal: Gram condition beyond 1e12; enlarge S or shrink N_trunc");

  Matrix L = cholesky(G, N_trunc);
  fam.Ginv.assign(N_trunc * N_trunc, 0.0);
  for (std::size_t col = 0; col < N_trunc; ++col) {
    std::vector<double> e(N_trunc, 0.0);
    e[col] = 1.0;
    cholesky_solve_inplace(L, N_trunc, e);
    for (std::size_t r = 0; r < N_trunc; ++r) fam.Ginv[r * N_trunc + col] = e[r];
  }
  double res = 0.0;
  for (std::size_t i = 0; i < N_trunc; ++i) {
    for (std::size_t j = 0; j < N_trunc; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < N_trunc; ++k) s += G[i * N_trunc + k] * fam.Ginv[k * N_trunc + j];
      res = std::max(res, std::fabs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  fam.solve_residual = res;

  // quadrature resolving the fastest oscillation sin(beta_max s)
  const double cycles = fam.betas.back() * S / (2.0 * M_PI);
  const std::size_t panels =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(cycles * 6.0)), 32, 512);
  fam.squad = composite_gl(0.0, S, panels, 16);
  return fam;
}

LogVal BiorthogonalFamily::c_of(double beta) const {
  const double a = alpha, Th = T;
  auto g = [a, Th, beta](double t) {
    return -a / t - a / (Th - t) - beta * beta * t;
  };
  const double t_star = golden_max(g, 1e-9 * Th, Th * (1.0 - 1e-9), 1e-13 * Th);
  const double g_star = g(t_star);
  const double mant = integrate([&](double t) { return std::exp(g(t) - g_star); }, 0.0, Th,
                                1e-12, 40);
  return LogVal(g_star + std::log(mant) - std::log(beta), 1);
}

LogVal BiorthogonalFamily::w_value(std::size_t n, double t) const {
  std::vector<LogVal> krow;
  kernel->evaluate_row(t, sine.squad.x, krow);
  std::vector<double> wts(sine.squad.x.size());
  for (std::size_t i = 0; i < wts.size(); ++i)
    wts[i] = 2.0 * sine.squad.w[i] * sine.v_eval(n, sine.squad.x[i]);
  return logval_dot(krow, wts);
}

LogVal BiorthogonalFamily::u_value(std::size_t n, double t) const {
  return w_value(n, t) / c[n];
}

LogVal BiorthogonalFamily::moment(std::size_t n, double beta) const {
  // int u_n e^{-beta^2 t} dt = (c(beta)/c_n) * int v_n sin(beta s) ds; the
  // reduction is exact for the flat window (integration by parts in t).
  return (c_of(beta) / c[n]) * LogVal::from(sine.pair_with_sin(n, beta));
}

BiorthogonalFamily exp_biorthogonal(const std::vector<double>& betas, double T, double S,
                                    double alpha, std::size_t N_trunc) {
  if (!(alpha > 2.0 * S * S))
    throw std::domain_error("exp_biorthogonal: alpha must exceed 2 S^2");
  BiorthogonalFamily fam;
  fam.sine = sine_biorthogonal(betas, S, N_trunc);
  fam.T = T;
  fam.S = S;
  fam.alpha = alpha;
  fam.N = N_trunc;
  fam.betas = fam.sine.betas;
  fam.kernel = std::make_shared<HeatKernel>(alpha, T, S, 60);
  fam.c.resize(N_trunc);
  for (std::size_t l = 0; l < N_trunc; ++l) {
    fam.c[l] = fam.c_of(fam.betas[l]);
    if (fam.c[l].is_zero() || !std::isfinite(fam.c[l].lg))
      throw InsufficientFamily("exp_biorthogonal: normalizer underflow at index " +
                               std::to_string(l));
  }
  fam.residual.assign(N_trunc * N_trunc, 0.0);
  for (std::size_t n = 0; n < N_trunc; ++n) {
    for (std::size_t l = 0; l < N_trunc; ++l) {
      const LogVal r = fam.moment(n, fam.betas[l]) - LogVal::from(n == l ? 1.0 : 0.0);
      fam.residual[n * N_trunc + l] = r.value();
      fam.max_residual = std::max(fam.max_residual, std::fabs(r.value()));
    }
  }
  return fam;
}

ControlSignal synthesize_control(const Spectrum& spec, const VectorField& field, double eps,
                                 double T, double m, const std::vector<double>& v0_coeffs,
                                 std::size_t N_trunc, double T1, const ControlOptions& opts) {
  if (!field.qf_identically_zero())
    throw AssumptionViolation("synthesize_control: requires q_f == 0");
  if (!(m >= 0.0) || !(m < 1.0))
    throw std::invalid_argument("synthesize_control: m must lie in [0,1)");
  if (N_trunc > spec.lambda.size())
    throw InsufficientFamily("synthesize_control: spectrum shorter than N_trunc");

  const double tau = (1.0 - m) * T;
  const double Tr = eps * tau;  // rescaled moment horizon
  std::vector<double> betas(spec.lambda.size());
  for (std::size_t l = 0; l < betas.size(); ++l) betas[l] = spec.beta[l] / eps;

  const double S = 0.5 * (T1 + opts.delta_gap);
  const double alpha = 2.0 * S * S * (1.0 + opts.eps_prime);

  ControlSignal sig;
  sig.family = std::make_shared<BiorthogonalFamily>(
      exp_biorthogonal(betas, Tr, S, alpha, N_trunc));
  if (sig.family->sine.cond > opts.cond_limit)
    throw IllConditionedFamily("synthesize_control: sine family ill-conditioned");
  sig.m = m;
  sig.T_total = T;
  sig.eps = eps;
  sig.N_trunc = N_trunc;
  sig.tau = tau;

  const double f0 = field.f(0.0);
  // alpha_l = -e^{-lambda_l tau/eps} <v(mT), phi_l> / (eps e^{-f0/2eps} phi_l'(0))
  sig.alpha_coeffs.assign(N_trunc, LogVal::zero());
  for (std::size_t l = 0; l < N_trunc; ++l) {
    if (l >= v0_coeffs.size() || v0_coeffs[l] == 0.0) continue;
    const LogVal decayed =
        LogVal::from(v0_coeffs[l]) * LogVal::exp_of(-spec.lambda[l] * m * T / eps);
    const LogVal denom =
        LogVal::from(spec.dphi0[l]) * LogVal::exp_of(-f0 / (2.0 * eps));  // eps phi'(0) > 0
    sig.alpha_coeffs[l] = -(LogVal::exp_of(-spec.lambda[l] * tau / eps) * decayed) / denom;
  }

  // z~(t) = sum_l alpha_l Psi_l(t), Psi_l(t) = eps u_l(eps t); h(t) = z~(T - t)
  const std::size_t nt = opts.nt_out;
  std::vector<double> t_active = linspace(m * T, T, nt);
  std::vector<LogVal> h_active(nt, LogVal::zero());
  auto eval_one = [&](std::size_t i) {
    const double t = t_active[i];
    const double zt = T - t;            // argument of z~ in [0, tau]
    const double tr = eps * zt;         // rescaled time in [0, Tr]
    if (!(tr > 0.0) || !(tr < Tr)) return;
    std::vector<LogVal> krow;
    sig.family->kernel->evaluate_row(tr, sig.family->sine.squad.x, krow);
    std::vector<LogVal> terms(N_trunc, LogVal::zero());
    for (std::size_t n = 0; n < N_trunc; ++n) {
      if (sig.alpha_coeffs[n].is_zero()) continue;
      std::vector<double> wts(krow.size());
      for (std::size_t q = 0; q < krow.size(); ++q)
        wts[q] = 2.0 * sig.family->sine.squad.w[q] *
                 sig.family->sine.v_eval(n, sig.family->sine.squad.x[q]);
      const LogVal w = logval_dot(krow, wts);
      terms[n] = sig.alpha_coeffs[n] * (w / sig.family->c[n]) * LogVal::from(eps);
    }
    LogVal acc = LogVal::zero();
    for (const LogVal& v : terms) acc += v;
    h_active[i] = acc;
  };
  par::for_index(nt, eval_one);

  if (m > 0.0) {
    sig.t_grid = {0.0, m * T * (1.0 - 1e-12)};
    sig.h_log = {LogVal::zero(), LogVal::zero()};
  }
  sig.t_grid.insert(sig.t_grid.end(), t_active.begin(), t_active.end());
  sig.h_log.insert(sig.h_log.end(), h_active.begin(), h_active.end());
  sig.h.resize(sig.h_log.size());
  for (std::size_t i = 0; i < sig.h.size(); ++i) sig.h[i] = sig.h_log[i].value();

  // ||h||^2 by trapezoid on the active grid, in log space
  LogVal nrm = LogVal::zero();
  for (std::size_t i = 0; i + 1 < t_active.size(); ++i) {
    const double dt = t_active[i + 1] - t_active[i];
    const LogVal a2 = h_active[i] * h_active[i];
    const LogVal b2 = h_active[i + 1] * h_active[i + 1];
    nrm += (a2 + b2) * LogVal::from(0.5 * dt);
  }
  sig.norm_sq = nrm;

  // cost-bound right side with the phase-2 initial state, constant stripped
  LogVal sum = LogVal::zero();
  for (std::size_t l = 0; l < N_trunc && l < v0_coeffs.size(); ++l) {
    if (v0_coeffs[l] == 0.0) continue;
    const LogVal vm =
        LogVal::from(v0_coeffs[l]) * LogVal::exp_of(-spec.lambda[l] * m * T / eps);
    const double dphi = spec.dphi0[l] / eps;  // phi_l'(0)
    sum += LogVal::from(spec.lambda[l] / (dphi * dphi)) * vm * vm;
  }
  sig.predicted_bound_noC =
      LogVal::exp_of((4.0 * T1 * T1 + opts.delta_gap) / (eps * tau) + f0 / eps) * sum /
      LogVal::from(std::pow(eps, 6) * tau * tau * tau);
  return sig;
}

ModalResidual verify_control_modal(const Spectrum& spec, const VectorField& field, double eps,
                                   const ControlSignal& sig,
                                   const std::vector<double>& v0_coeffs) {
  const std::size_t N_use = std::min(v0_coeffs.size(), spec.lambda.size());
  const double f0 = field.f(0.0);
  ModalResidual out;
  out.final_coeff.assign(N_use, LogVal::zero());
  out.free_coeff.assign(N_use, LogVal::zero());

  for (std::size_t l = 0; l < N_use; ++l) {
    const LogVal free_decay =
        LogVal::from(v0_coeffs[l]) * LogVal::exp_of(-spec.lambda[l] * sig.T_total / eps);
    out.free_coeff[l] = free_decay;
    // I_l = int_0^tau z~(r) e^{-lambda_l r/eps} dr via the family reduction
    const double beta_l = spec.beta[l] / eps;
    LogVal I = LogVal::zero();
    for (std::size_t j = 0; j < sig.N_trunc; ++j) {
      if (sig.alpha_coeffs[j].is_zero()) continue;
      I += sig.alpha_coeffs[j] * sig.family->moment(j, beta_l);
    }
    const LogVal bdry =
        LogVal::from(spec.dphi0[l]) * LogVal::exp_of(-f0 / (2.0 * eps)) * I;
    out.final_coeff[l] = free_decay + bdry;
  }

  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < N_use; ++l) {
    const double fv = out.final_coeff[l].value();
    num += fv * fv;
    den += v0_coeffs[l] * v0_coeffs[l];
  }
  out.l2_residual_vs_init = (den > 0.0) ? std::sqrt(num / den) : 0.0;

  for (std::size_t l = 0; l < std::min(N_use, sig.N_trunc); ++l) {
    if (out.free_coeff[l].is_zero()) continue;
    const LogVal rel = out.final_coeff[l] / out.free_coeff[l];
    out.max_rel_vs_free = std::max(out.max_rel_vs_free, std::fabs(rel.value()));
  }
  return out;
}

}  // namespace vvc
