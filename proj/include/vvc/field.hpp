#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vvc/spline.hpp"

namespace vvc {

enum class Sign { plus, minus };
enum class FieldKind { closed_form_example, tabulated };
enum class CaseSign { increasing, decreasing, mixed };

// A 1D drift field on [0,L], described through the antiderivative f with
// f(0) = 0, its derivatives, and the zeroth-order coefficient b.
// Immutable after construction; safe to share across threads.
class VectorField {
 public:
  double L = 0.0;
  FieldKind kind = FieldKind::closed_form_example;

  // closed-form parameters (valid when kind == closed_form_example)
  double M = 0.0;
  double a_conv = 0.0;
  Sign sign = Sign::plus;

  double f(double x) const { return f_(x); }
  double a(double x) const { return df_(x); }    // transport speed, f'
  double ddf(double x) const { return ddf_(x); }
  double b(double x) const { return b_(x); }
  double q(double x) const { return ddf_(x) - b_(x); }
  double qf(double x) const { return qf_zero_ ? 0.0 : 0.5 * ddf_(x) - q(x); }
  double V(double x) const { const double s = df_(x); return 0.25 * s * s; }

  bool qf_identically_zero() const { return qf_zero_; }

  // dV/dx and d2V/dx2; closed-form where available, central differences otherwise.
  double dV(double x) const;
  double d2V(double x) const;

  std::function<double(double)> f_, df_, ddf_, b_;
  bool qf_zero_ = true;
};

// The harmonic-over-floor example family, exposed on [0,L] (internally the
// symmetric interval shifted by L/2).  b defaults to a'/2 so that q_f = 0.
VectorField make_example_field(double M, double a, Sign sign, double L);

// Same field but with a user-supplied q (so q_f = f''/2 - q need not vanish).
VectorField make_example_field_with_q(double M, double a, Sign sign, double L,
                                      std::function<double(double)> q);

// Tabulated field: natural cubic spline through (grid, f_values).
// Requires >= 16 samples with strictly increasing abscissae.
VectorField make_tabulated_field(std::vector<double> grid, std::vector<double> f_values);

struct ItemCheck {
  bool pass = false;
  std::vector<double> witnesses;
  std::string detail;
};

struct AssumptionReport {
  ItemCheck a1, a2, a3, a4;
  CaseSign case_sign = CaseSign::mixed;
  double margin = 0.0;  // min |a| over [0,L]
  double x0 = 0.0;      // candidate critical point when a2 passes

  bool all_pass() const { return a1.pass && a2.pass && a3.pass && a4.pass; }
  // Gate used by the solvers: the symmetric example family has V(0) = V(L)
  // exactly, so a3 is reported but not enforced.
  bool hard_pass() const { return a1.pass && a2.pass && a4.pass; }
  std::string failing_items() const;
};

AssumptionReport validate_assumptions(const VectorField& field, std::size_t grid_points = 4096);

struct Potential {
  std::function<double(double)> V;
  double L = 0.0;
  double x0 = 0.0;
  double E0 = 0.0;
  double V0 = 0.0;
  double VL = 0.0;
  double Vmax = 0.0;  // max(V0, VL)
  double second_deriv_at_min = 0.0;
};

// Requires assumption items 1-2; throws AssumptionViolation otherwise.
Potential potential(const VectorField& field);

}  // namespace vvc
