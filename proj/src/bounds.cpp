#include "vvc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvc/parallel.hpp"
#include "vvc/quadrature.hpp"
#include "vvc/rootfind.hpp"
#include "vvc/util.hpp"

namespace vvc {

double limit_transport_time(const VectorField& field, double abs_tol) {
  AssumptionReport rep = validate_assumptions(field);
  if (!rep.a1.pass)
    throw AssumptionViolation("limit_transport_time: speed vanishes, flushing time is infinite");
  return integrate([&](double s) { return 1.0 / std::fabs(field.a(s)); }, 0.0, field.L, abs_tol);
}

BoundsContext::BoundsContext(const VectorField& field, double B_max)
    : field_(field), pot_(potential(field)), sup_period_(sup_period(pot_)) {
  B_max_ = (B_max > 0.0) ? B_max : 10.0 * pot_.Vmax;
  const double cap = std::max(50.0 * std::max(pot_.Vmax, pot_.E0),
                              8.0 * (pot_.Vmax + 2.0 * B_max_));
  dphi_.emplace(pot_, cap);
}

double BoundsContext::G14(double E) const {
  AgmonProfile prof = weight_profiles(field_, pot_, E);
  const double W0 = 0.5 * field_.f(0.0) + prof.d0;
  return W0 - prof.min_W.value;
}

double BoundsContext::G15(double E) const {
  AgmonProfile prof = weight_profiles(field_, pot_, E);
  const double W0 = 0.5 * field_.f(0.0) + prof.d0;
  return W0 - prof.sup_Wt.value;
}

double BoundsContext::TEB(double E, double B) const {
  return interaction_time(pot_, *dphi_, E, B);
}

GeometricConstants BoundsContext::constants(double E, double B) const {
  GeometricConstants g;
  g.E = E;
  g.B = B;
  AgmonProfile prof = weight_profiles(field_, pot_, E);
  const double W0 = 0.5 * field_.f(0.0) + prof.d0;
  g.G14 = W0 - prof.min_W.value;
  g.G15 = W0 - prof.sup_Wt.value;
  g.G16 = g.G14;
  g.S14 = 0.0;
  g.S15 = TEB(E, B);
  g.S16 = 2.0 * std::sqrt(2.0) * std::sqrt(pot_.E0) * sup_period_.T1;
  return g;
}

GeometricConstants geometric_constants(const VectorField& field, double E, double B) {
  BoundsContext ctx(field);
  return ctx.constants(E, B);
}

namespace {

// sup over E in [E0, Vmax] of a scalar objective; 256-point grid plus golden
// refinement.  Beyond Vmax the weights reduce to f/2 so the objectives only
// decrease; the sup restricts to the compact band.
SupResult sup_over_energy(const BoundsContext& ctx, const std::function<double(double)>& obj) {
  const Potential& pot = ctx.pot();
  const double span = std::max(pot.Vmax - pot.E0, 1e-6 * pot.E0);
  std::vector<double> Es = linspace(pot.E0, pot.Vmax, 256);
  std::vector<double> vals(Es.size());
  par::for_index(Es.size(), [&](std::size_t i) { vals[i] = obj(Es[i]); });
  std::size_t ib = 0;
  for (std::size_t i = 1; i < Es.size(); ++i)
    if (vals[i] > vals[ib]) ib = i;
  const double lo = Es[ib == 0 ? 0 : ib - 1];
  const double hi = Es[std::min(ib + 1, Es.size() - 1)];
  SupResult r;
  r.arg_E = (hi > lo) ? golden_max(obj, lo, hi, 1e-9 * span) : Es[ib];
  r.value = obj(r.arg_E);
  if (vals[ib] > r.value) {  // guard against refinement slipping off a kink
    r.value = vals[ib];
    r.arg_E = Es[ib];
  }
  return r;
}

}  // namespace

SupResult lower_bound_T14(const BoundsContext& ctx) {
  AssumptionReport rep = validate_assumptions(ctx.field());
  if (!rep.a2.pass) throw AssumptionViolation("lower_bound_T14: item A2 required");
  return sup_over_energy(ctx, [&](double E) { return ctx.G14(E) / E; });
}

SupResultEB lower_bound_T15(const BoundsContext& ctx) {
  const VectorField& field = ctx.field();
  if (!field.qf_identically_zero())
    throw AssumptionViolation("lower_bound_T15: requires q_f == 0");
  AssumptionReport rep = validate_assumptions(field);
  if (!rep.hard_pass())
    throw AssumptionViolation("lower_bound_T15: assumption items failed: " + rep.failing_items());

  const Potential& pot = ctx.pot();
  const double B_max = ctx.B_max();
  const std::size_t nE = 48, nB = 28;
  const std::vector<double> Es = linspace(pot.E0, pot.Vmax, nE);
  std::vector<double> Bs = linspace(0.0, std::sqrt(B_max), nB);
  for (double& b : Bs) b = b * b;  // quadratic clustering toward B = 0

  std::vector<double> g15(nE);
  par::for_index(nE, [&](std::size_t i) { g15[i] = ctx.G15(Es[i]); });

  std::vector<double> vals(nE * nB);
  par::for_index(nE * nB, [&](std::size_t idx) {
    const std::size_t i = idx / nB, j = idx % nB;
    vals[idx] = (g15[i] + ctx.TEB(Es[i], Bs[j])) / (Es[i] + Bs[j]);
  });
  std::size_t best = 0;
  for (std::size_t idx = 1; idx < vals.size(); ++idx)
    if (vals[idx] > vals[best]) best = idx;
  double E_best = Es[best / nB], B_best = Bs[best % nB];

  // coordinate golden refinement
  auto obj = [&](double E, double B) { return (ctx.G15(E) + ctx.TEB(E, B)) / (E + B); };
  for (int round = 0; round < 2; ++round) {
    const std::size_t i = best / nB, j = best % nB;
    const double E_lo = Es[i == 0 ? 0 : i - 1], E_hi = Es[std::min(i + 1, nE - 1)];
    const double B_lo = Bs[j == 0 ? 0 : j - 1], B_hi = Bs[std::min(j + 1, nB - 1)];
    if (E_hi > E_lo)
      E_best = golden_max([&](double E) { return obj(E, B_best); }, E_lo, E_hi, 1e-7);
    if (B_hi > B_lo)
      B_best = golden_max([&](double B) { return obj(E_best, B); }, B_lo, B_hi, 1e-7);
  }

  SupResultEB r;
  r.arg_E = E_best;
  r.arg_B = B_best;
  r.value = obj(E_best, B_best);
  r.B_at_boundary = B_best > 0.97 * B_max;
  return r;
}

double upper_bound_T16(const BoundsContext& ctx) {
  const VectorField& field = ctx.field();
  if (!field.qf_identically_zero())
    throw AssumptionViolation("upper_bound_T16: requires q_f == 0");
  AssumptionReport rep = validate_assumptions(field);
  if (!rep.hard_pass())
    throw AssumptionViolation("upper_bound_T16: assumption items failed: " + rep.failing_items());
  const double E0 = ctx.pot().E0;
  const double supG = sup_over_energy(ctx, [&](double E) { return ctx.G14(E); }).value;
  return (supG + 2.0 * std::sqrt(2.0) * std::sqrt(E0) * ctx.T1()) / E0;
}

double cost_exponent_upper(const BoundsContext& ctx, double T, double m, double delta) {
  if (!(m > 0.0) || !(m < 1.0)) {
    if (m != 0.0) throw std::domain_error("cost_exponent_upper: m must lie in (0,1)");
  }
  if (!(T > 0.0)) throw std::domain_error("cost_exponent_upper: T must be positive");
  if (!(delta >= 0.0)) throw std::domain_error("cost_exponent_upper: delta must be >= 0");
  const double sup = sup_over_energy(ctx, [&](double E) {
                       return ctx.G14(E) - m * (1.0 - delta) * E * T;
                     }).value;
  return 2.0 * sq(ctx.T1()) / ((1.0 - m) * T) + sup;
}

MinimizeF minimize_F(double a_coef, double b_coef) {
  if (!(a_coef > 0.0) || !(b_coef > 0.0))
    throw std::invalid_argument("minimize_F: coefficients must be positive");
  MinimizeF r;
  if (a_coef >= b_coef) {
    r.m_star = 0.0;
    r.value = a_coef;
  } else {
    r.m_star = 1.0 - std::sqrt(a_coef / b_coef);
    r.value = 2.0 * std::sqrt(a_coef * b_coef) - b_coef;
  }
  return r;
}

double threshold_time(double a_coef, double b_coef, double c_coef) {
  if (!(a_coef > 0.0) || !(b_coef > 0.0) || !(c_coef >= 0.0))
    throw std::invalid_argument("threshold_time: coefficients must be positive");
  return 2.0 * std::sqrt(a_coef / b_coef) + c_coef / b_coef;
}

BoundsReport bounds_report(const VectorField& field, double B_max) {
  BoundsContext ctx(field, B_max);
  BoundsReport rep;
  rep.E0 = ctx.pot().E0;
  rep.Vmax = ctx.pot().Vmax;
  rep.T1 = ctx.T1();
  rep.T1_arg = ctx.T1_arg();
  rep.T_limit = limit_transport_time(field);
  rep.T14 = lower_bound_T14(ctx);
  rep.T15 = lower_bound_T15(ctx);
  rep.T16 = upper_bound_T16(ctx);
  rep.sup_G14 = sup_over_energy(ctx, [&](double E) { return ctx.G14(E); }).value;
  rep.m_star = minimize_F(2.0 * sq(rep.T1) / rep.T16, rep.E0 * rep.T16).m_star;
  rep.kappa0_value = kappa0().value;
  rep.case_sign = validate_assumptions(field).case_sign;
  return rep;
}

}  // namespace vvc
