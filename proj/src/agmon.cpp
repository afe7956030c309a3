#include "vvc/agmon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvc/quadrature.hpp"
#include "vvc/rootfind.hpp"
#include "vvc/util.hpp"

namespace vvc {

namespace {

// Integral of sqrt((V-E)_+) from a turning point `tp` outward to `x`.
// The substitution s = tp +/- u^2 removes the square-root edge analytically.
double forbidden_integral(const Potential& pot, double E, double tp, double x, double abs_tol) {
  if (x == tp) return 0.0;
  const double sgn = (x > tp) ? 1.0 : -1.0;
  const double span = std::fabs(x - tp);
  auto g = [&](double u) {
    const double s = tp + sgn * u * u;
    const double dv = pot.V(s) - E;
    return 2.0 * u * std::sqrt(std::max(dv, 0.0));
  };
  return integrate(g, 0.0, std::sqrt(span), abs_tol);
}

}  // namespace

namespace {

// Newton polish of a turning point: the downstream substitutions assume
// |V(x) - E| at machine level, otherwise the residual root offset shows up
// as a spurious interior spike of the transformed integrands.
double polish_turning_point(const Potential& pot, double E, double x, double lo, double hi) {
  for (int it = 0; it < 4; ++it) {
    const double h = 1e-7 * std::max(1.0, pot.L);
    const double dv = (pot.V(std::min(x + h, hi)) - pot.V(std::max(x - h, lo))) /
                      (std::min(x + h, hi) - std::max(x - h, lo));
    if (dv == 0.0 || !std::isfinite(dv)) break;
    const double step = (pot.V(x) - E) / dv;
    const double xn = std::clamp(x - step, lo, hi);
    if (xn == x) break;
    x = xn;
  }
  return x;
}

}  // namespace

std::pair<double, double> turning_points(const Potential& pot, double E) {
  if (E < pot.E0 - 1e-14 * std::max(1.0, pot.E0))
    throw std::domain_error("turning_points: energy below ground energy");
  const double Ec = std::max(E, pot.E0);

  double xm, xp;
  if (Ec >= pot.V0) {
    xm = 0.0;
  } else {
    xm = find_root([&](double x) { return pot.V(x) - Ec; }, 0.0, pot.x0, 1e-12);
    xm = polish_turning_point(pot, Ec, xm, 0.0, pot.x0);
  }
  if (Ec >= pot.VL) {
    xp = pot.L;
  } else {
    xp = find_root([&](double x) { return pot.V(x) - Ec; }, pot.x0, pot.L, 1e-12);
    xp = polish_turning_point(pot, Ec, xp, pot.x0, pot.L);
  }
  return {xm, xp};
}

double agmon_distance(const Potential& pot, double E, double x, double abs_tol) {
  if (x < -1e-12 || x > pot.L + 1e-12)
    throw std::domain_error("agmon_distance: x outside [0,L]");
  auto [xm, xp] = turning_points(pot, E);
  if (x >= xm && x <= xp) return 0.0;
  if (x < xm) return forbidden_integral(pot, E, xm, x, abs_tol);
  return forbidden_integral(pot, E, xp, x, abs_tol);
}

std::vector<double> agmon_distance_grid(const Potential& pot, double E,
                                        const std::vector<double>& xs, double abs_tol) {
  auto [xm, xp] = turning_points(pot, E);
  std::vector<double> d(xs.size(), 0.0);
  const double panel_tol = abs_tol / std::max<std::size_t>(xs.size(), 1);
  // right forbidden side, cumulative from xp
  double acc = 0.0;
  double prev = xp;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= xp) continue;
    if (prev == xp) {
      acc = forbidden_integral(pot, E, xp, xs[i], panel_tol);
    } else {
      auto g = [&](double s) { return std::sqrt(std::max(pot.V(s) - E, 0.0)); };
      acc += integrate(g, prev, xs[i], panel_tol);
    }
    d[i] = acc;
    prev = xs[i];
  }
  // left forbidden side, cumulative from xm going down
  acc = 0.0;
  prev = xm;
  for (std::size_t i = xs.size(); i-- > 0;) {
    if (xs[i] >= xm) continue;
    if (prev == xm) {
      acc = forbidden_integral(pot, E, xm, xs[i], panel_tol);
    } else {
      auto g = [&](double s) { return std::sqrt(std::max(pot.V(s) - E, 0.0)); };
      acc += integrate(g, xs[i], prev, panel_tol);
    }
    d[i] = acc;
    prev = xs[i];
  }
  return d;
}

AgmonProfile weight_profiles(const VectorField& field, const Potential& pot, double E,
                             std::size_t grid_points) {
  AgmonProfile prof;
  prof.E = E;
  auto [xm, xp] = turning_points(pot, E);
  prof.x_minus = xm;
  prof.x_plus = xp;
  prof.d0 = agmon_distance(pot, E, 0.0);
  prof.dL = agmon_distance(pot, E, pot.L);

  const Potential pot_copy = pot;
  prof.d_fn = [pot_copy, E](double x) { return agmon_distance(pot_copy, E, x); };
  auto d_fn = prof.d_fn;
  const VectorField f_copy = field;
  prof.W_fn = [f_copy, d_fn](double x) { return 0.5 * f_copy.f(x) + d_fn(x); };
  prof.Wt_fn = [f_copy, d_fn](double x) { return 0.5 * f_copy.f(x) - d_fn(x); };

  // Extrema over a refined grid; golden polish around the best cell.
  const std::vector<double> xs = linspace(0.0, pot.L, grid_points);
  const std::vector<double> dg = agmon_distance_grid(pot, E, xs);
  std::size_t i_min = 0, i_max = 0;
  double w_min = std::numeric_limits<double>::infinity();
  double wt_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fv = 0.5 * field.f(xs[i]);
    const double w = fv + dg[i];
    const double wt = fv - dg[i];
    if (w < w_min) {
      w_min = w;
      i_min = i;
    }
    if (wt > wt_max) {
      wt_max = wt;
      i_max = i;
    }
  }
  auto refine = [&](std::size_t i, const std::function<double(double)>& fn, bool maximize) {
    const double lo = xs[i == 0 ? 0 : i - 1];
    const double hi = xs[std::min(i + 1, xs.size() - 1)];
    double loc = maximize ? golden_max(fn, lo, hi, 1e-11) : golden_min(fn, lo, hi, 1e-11);
    return Extremum{fn(loc), loc};
  };
  prof.min_W = refine(i_min, prof.W_fn, false);
  prof.sup_Wt = refine(i_max, prof.Wt_fn, true);
  return prof;
}

CaseReport monotonicity_case(const VectorField& field, std::size_t sample_energies) {
  AssumptionReport rep = validate_assumptions(field);
  if (rep.case_sign == CaseSign::mixed || !rep.a1.pass || !rep.a2.pass)
    throw AssumptionViolation("monotonicity_case: items A1-A2 required, field is " +
                              std::string(rep.case_sign == CaseSign::mixed ? "mixed-sign" : "degenerate"));
  Potential pot = potential(field);

  CaseReport out;
  out.sign_case = rep.case_sign;
  out.W_increasing = (rep.case_sign == CaseSign::increasing);

  const double E_hi = 2.0 * std::max(pot.Vmax, pot.E0 * 1.5);
  bool ok = true;
  const std::vector<double> xs = linspace(0.0, pot.L, 512);
  for (std::size_t j = 0; j < sample_energies; ++j) {
    const double E = pot.E0 + (E_hi - pot.E0) * static_cast<double>(j) /
                                 static_cast<double>(sample_energies - 1);
    const std::vector<double> dg = agmon_distance_grid(pot, E, xs);
    double prev_w = 0, prev_wt = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double fv = 0.5 * field.f(xs[i]);
      const double w = fv + dg[i];
      const double wt = fv - dg[i];
      if (i > 0) {
        const double tol = 1e-9 * std::max(1.0, std::fabs(w));
        if (out.W_increasing) {
          if (w < prev_w - tol || wt < prev_wt - tol) ok = false;
        } else {
          if (w > prev_w + tol || wt > prev_wt + tol) ok = false;
        }
      }
      prev_w = w;
      prev_wt = wt;
    }
    if (j == 0) {
      AgmonProfile prof = weight_profiles(field, pot, E);
      out.minW_location = prof.min_W.location;
      out.supWt_location = prof.sup_Wt.location;
    }
  }
  out.monotone_verified = ok;
  return out;
}

}  // namespace vvc
