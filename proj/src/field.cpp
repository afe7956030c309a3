#include "vvc/field.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "vvc/rootfind.hpp"
#include "vvc/util.hpp"

namespace vvc {

double VectorField::dV(double x) const { return 0.5 * df_(x) * ddf_(x); }

double VectorField::d2V(double x) const {
  // central difference of dV; h balanced for ~1e-8 accuracy on smooth fields
  const double h = std::max(1e-6, 1e-6 * L);
  const double xl = std::max(0.0, x - h), xr = std::min(L, x + h);
  return (dV(xr) - dV(xl)) / (xr - xl);
}

VectorField make_example_field(double M, double a, Sign sign, double L) {
  return make_example_field_with_q(M, a, sign, L, nullptr);
}

VectorField make_example_field_with_q(double M, double a, Sign sign, double L,
                                      std::function<double(double)> q) {
  if (M <= 0.0) throw std::invalid_argument("make_example_field: M must be > 0");
  if (a < 0.0) throw std::invalid_argument("make_example_field: a must be >= 0");
  if (L <= 0.0) throw std::invalid_argument("make_example_field: L must be > 0");

  const double s = (sign == Sign::plus) ? 1.0 : -1.0;
  const double half = 0.5 * L;

  // antiderivative of sqrt(a^2 u^2 + M^2) on the centered coordinate
  auto F = [M, a](double u) {
    if (a == 0.0) return M * u;
    return 0.5 * u * std::sqrt(a * a * u * u + M * M) +
           (M * M / (2.0 * a)) * std::asinh(a * u / M);
  };
  const double F0 = F(-half);

  VectorField vf;
  vf.L = L;
  vf.kind = FieldKind::closed_form_example;
  vf.M = M;
  vf.a_conv = a;
  vf.sign = sign;
  vf.f_ = [s, F, F0, half](double x) { return s * (F(x - half) - F0); };
  vf.df_ = [s, M, a, half](double x) {
    const double u = x - half;
    return s * std::sqrt(a * a * u * u + M * M);
  };
  vf.ddf_ = [s, M, a, half](double x) {
    const double u = x - half;
    return s * a * a * u / std::sqrt(a * a * u * u + M * M);
  };
  if (q) {
    vf.qf_zero_ = false;
    auto ddf = vf.ddf_;
    vf.b_ = [ddf, q](double x) { return ddf(x) - q(x); };
  } else {
    vf.qf_zero_ = true;
    auto ddf = vf.ddf_;
    vf.b_ = [ddf](double x) { return 0.5 * ddf(x); };
  }
  return vf;
}

VectorField make_tabulated_field(std::vector<double> grid, std::vector<double> f_values) {
  if (grid.size() < 16) throw std::invalid_argument("make_tabulated_field: need >= 16 samples");
  if (grid.size() != f_values.size())
    throw std::invalid_argument("make_tabulated_field: grid/value size mismatch");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("make_tabulated_field: abscissae must be strictly increasing");
  const double x_lo = grid.front();
  const double f0 = f_values.front();
  // normalize to [0,L] with f(0) = 0
  for (double& x : grid) x -= x_lo;
  for (double& v : f_values) v -= f0;

  VectorField vf;
  vf.L = grid.back();
  vf.kind = FieldKind::tabulated;
  auto sp = std::make_shared<CubicSpline>(std::move(grid), std::move(f_values));
  vf.f_ = [sp](double x) { return sp->eval(x); };
  vf.df_ = [sp](double x) { return sp->deriv(x); };
  vf.ddf_ = [sp](double x) { return sp->deriv2(x); };
  vf.qf_zero_ = true;
  auto ddf = vf.ddf_;
  vf.b_ = [ddf](double x) { return 0.5 * ddf(x); };
  return vf;
}

std::string AssumptionReport::failing_items() const {
  std::string s;
  auto add = [&s](const char* name, const ItemCheck& c) {
    if (!c.pass) {
      if (!s.empty()) s += ",";
      s += name;
    }
  };
  add("A1", a1);
  add("A2", a2);
  add("A3", a3);
  add("A4", a4);
  return s;
}

AssumptionReport validate_assumptions(const VectorField& field, std::size_t grid_points) {
  AssumptionReport rep;
  const double L = field.L;
  const std::vector<double> xs = linspace(0.0, L, grid_points);

  // Item 1: the speed does not vanish.
  double min_abs_a = std::numeric_limits<double>::infinity();
  double min_a = std::numeric_limits<double>::infinity();
  double max_a = -std::numeric_limits<double>::infinity();
  double argmin_abs = 0.0;
  for (double x : xs) {
    const double ax = field.a(x);
    min_a = std::min(min_a, ax);
    max_a = std::max(max_a, ax);
    if (std::fabs(ax) < min_abs_a) {
      min_abs_a = std::fabs(ax);
      argmin_abs = x;
    }
  }
  rep.margin = min_abs_a;
  if (min_a > 0.0)
    rep.case_sign = CaseSign::increasing;
  else if (max_a < 0.0)
    rep.case_sign = CaseSign::decreasing;
  else
    rep.case_sign = CaseSign::mixed;
  rep.a1.pass = (rep.case_sign != CaseSign::mixed) && min_abs_a > 0.0;
  if (!rep.a1.pass) {
    rep.a1.witnesses.push_back(argmin_abs);
    rep.a1.detail = "speed reaches zero or changes sign";
  }

  // Item 2: critical points of V.  Locate sign changes of V' with refinement;
  // tolerance 1e-10 on |V'| flags flat stretches.
  const double v_scale = std::max({std::fabs(field.V(0.0)), std::fabs(field.V(L)), 1.0});
  const double dv_tol = 1e-10 * std::max(1.0, v_scale / std::max(L, 1e-300));
  std::vector<double> crit;
  double max_abs_dv = 0.0;
  for (double x : xs) max_abs_dv = std::max(max_abs_dv, std::fabs(field.dV(x)));
  if (max_abs_dv <= dv_tol) {
    rep.a2.pass = false;
    rep.a2.detail = "V' vanishes identically (flat potential)";
    rep.a2.witnesses.push_back(0.5 * L);
  } else {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double g0 = field.dV(xs[i]);
      const double g1 = field.dV(xs[i + 1]);
      if (g0 == 0.0 && xs[i] > 0.0) {
        crit.push_back(xs[i]);
        continue;
      }
      if (g0 * g1 < 0.0) {
        crit.push_back(find_root([&](double x) { return field.dV(x); }, xs[i], xs[i + 1], 1e-12));
      }
    }
    // merge near-duplicates
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end(),
                           [L](double p, double q) { return std::fabs(p - q) < 1e-8 * L; }),
               crit.end());
    rep.a2.witnesses = crit;
    if (crit.size() == 1 && crit[0] > 0.0 && crit[0] < L) {
      const double x0 = crit[0];
      const double Vx0 = field.V(x0);
      bool is_min = Vx0 <= field.V(0.0) + dv_tol && Vx0 <= field.V(L) + dv_tol;
      rep.a2.pass = is_min;
      rep.x0 = x0;
      if (!is_min) rep.a2.detail = "unique critical point is not the minimum";
    } else {
      rep.a2.pass = false;
      rep.a2.detail = crit.empty() ? "no interior critical point" : "multiple critical points";
    }
  }

  // Item 3: distinct endpoint values.  Advisory: the symmetric example family
  // fails this exactly, which the solvers tolerate (reported, not enforced).
  const double V0 = field.V(0.0), VL = field.V(L);
  rep.a3.pass = std::fabs(V0 - VL) > 1e-9 * std::max(1.0, std::max(V0, VL));
  if (!rep.a3.pass) {
    rep.a3.witnesses = {0.0, L};
    rep.a3.detail = "V(0) = V(L) (symmetric barrier)";
  }

  // Item 4: nondegenerate minimum.
  if (rep.a2.pass) {
    const double d2 = field.d2V(rep.x0);
    rep.a4.pass = d2 > 1e-8;
    if (!rep.a4.pass) {
      rep.a4.witnesses.push_back(rep.x0);
      rep.a4.detail = "V''(x0) <= 0 (degenerate minimum)";
    }
  } else {
    rep.a4.pass = false;
    rep.a4.detail = "no valid minimum to test";
  }

  return rep;
}

Potential potential(const VectorField& field) {
  AssumptionReport rep = validate_assumptions(field);
  if (!rep.a1.pass || !rep.a2.pass) {
    throw AssumptionViolation("potential: assumption items failed: " + rep.failing_items());
  }
  Potential pot;
  pot.L = field.L;
  pot.V = [field](double x) { return field.V(x); };
  // polish the critical point on V' (well-conditioned), golden as fallback
  const double span = field.L / 4096.0;
  const double lo = std::max(0.0, rep.x0 - 2.0 * span);
  const double hi = std::min(field.L, rep.x0 + 2.0 * span);
  if (field.dV(lo) < 0.0 && field.dV(hi) > 0.0) {
    pot.x0 = find_root([&](double x) { return field.dV(x); }, lo, hi, 1e-14 * field.L);
  } else {
    pot.x0 = golden_min([&](double x) { return field.V(x); }, lo, hi, 1e-12);
  }
  pot.E0 = field.V(pot.x0);
  pot.V0 = field.V(0.0);
  pot.VL = field.V(field.L);
  pot.Vmax = std::max(pot.V0, pot.VL);
  pot.second_deriv_at_min = field.d2V(pot.x0);
  return pot;
}

}  // namespace vvc
