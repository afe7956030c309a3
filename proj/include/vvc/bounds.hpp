#pragma once

#include <optional>
#include <vector>

#include "vvc/agmon.hpp"
#include "vvc/classical.hpp"
#include "vvc/field.hpp"

namespace vvc {

// Flushing time of the inviscid transport equation.
double limit_transport_time(const VectorField& field, double abs_tol = 1e-12);

struct GeometricConstants {
  double E = 0.0, B = 0.0;
  double G14 = 0.0;  // W_E(0) - min W_E
  double G15 = 0.0;  // W_E(0) - sup ~W_E
  double G16 = 0.0;  // = G14
  double S14 = 0.0;
  double S15 = 0.0;  // T_{E,B}
  double S16 = 0.0;  // 2 sqrt(2) sqrt(E0) T1
};

// Shared per-field context so the sup-over-energy loops reuse the classical
// cache instead of rebuilding quadratures per evaluation.
class BoundsContext {
 public:
  explicit BoundsContext(const VectorField& field, double B_max = -1.0);

  const VectorField& field() const { return field_; }
  const Potential& pot() const { return pot_; }
  double T1() const { return sup_period_.T1; }
  double T1_arg() const { return sup_period_.arg_E; }
  double B_max() const { return B_max_; }

  double G14(double E) const;
  double G15(double E) const;
  double TEB(double E, double B) const;
  GeometricConstants constants(double E, double B) const;

 private:
  VectorField field_;
  Potential pot_;
  SupPeriod sup_period_;
  double B_max_;
  std::optional<PhiPrime> dphi_;
};

GeometricConstants geometric_constants(const VectorField& field, double E, double B);

struct SupResult {
  double value = 0.0;
  double arg_E = 0.0;
};
struct SupResultEB {
  double value = 0.0;
  double arg_E = 0.0;
  double arg_B = 0.0;
  bool B_at_boundary = false;
};

SupResult lower_bound_T14(const BoundsContext& ctx);
SupResultEB lower_bound_T15(const BoundsContext& ctx);  // requires q_f == 0
double upper_bound_T16(const BoundsContext& ctx);

// Cost exponent of the upper-bound theorem; sup over E in V([0,L]).
double cost_exponent_upper(const BoundsContext& ctx, double T, double m, double delta);

struct MinimizeF {
  double m_star = 0.0;
  double value = 0.0;
};
// min over m in [0,1) of a/(1-m) - b m, closed form.
MinimizeF minimize_F(double a_coef, double b_coef);

// Smallest T with min_m [a/((1-m)T) - b m T + c] < 0.
double threshold_time(double a_coef, double b_coef, double c_coef);

struct BoundsReport {
  double E0 = 0.0, Vmax = 0.0;
  double T1 = 0.0, T1_arg = 0.0;
  double T_limit = 0.0;
  SupResult T14;
  SupResultEB T15;
  double T16 = 0.0;
  double sup_G14 = 0.0;
  double m_star = 0.0;        // optimizer of the cost exponent at T = T16
  double kappa0_value = 0.0;
  CaseSign case_sign = CaseSign::mixed;
};

BoundsReport bounds_report(const VectorField& field, double B_max = -1.0);

}  // namespace vvc
