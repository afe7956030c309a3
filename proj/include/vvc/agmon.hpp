#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "vvc/field.hpp"

namespace vvc {

// Turning points x-(E) <= x0 <= x+(E) of {V = E}, clamped to [0,L] once the
// energy exceeds the corresponding endpoint value.
std::pair<double, double> turning_points(const Potential& pot, double E);

// Agmon distance to the classically allowed region at energy E.
double agmon_distance(const Potential& pot, double E, double x, double abs_tol = 1e-12);

// Distance evaluated cumulatively on a sorted grid (one quadrature per panel).
std::vector<double> agmon_distance_grid(const Potential& pot, double E,
                                        const std::vector<double>& xs,
                                        double abs_tol = 1e-12);

struct Extremum {
  double value = 0.0;
  double location = 0.0;
};

// Per-energy geometry: the weights W_E = f/2 + d_A and ~W_E = f/2 - d_A with
// their extrema located on a refined grid (no endpoint-extremum assumption).
struct AgmonProfile {
  double E = 0.0;
  double x_minus = 0.0, x_plus = 0.0;
  double d0 = 0.0, dL = 0.0;  // boundary Agmon distances
  std::function<double(double)> d_fn, W_fn, Wt_fn;
  Extremum min_W, sup_Wt;
};

AgmonProfile weight_profiles(const VectorField& field, const Potential& pot, double E,
                             std::size_t grid_points = 2048);

struct CaseReport {
  CaseSign sign_case = CaseSign::mixed;
  bool W_increasing = false;   // direction shared by W_E and ~W_E
  bool monotone_verified = false;
  double minW_location = 0.0;  // for the lowest sampled energy
  double supWt_location = 0.0;
};

// Classifies the field per the sign dichotomy and verifies the monotonicity of
// W_E, ~W_E on a grid for a sample of energies.
CaseReport monotonicity_case(const VectorField& field, std::size_t sample_energies = 8);

}  // namespace vvc
