#include "vvc/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvc/agmon.hpp"
#include "vvc/parallel.hpp"
#include "vvc/quadrature.hpp"
#include "vvc/rootfind.hpp"
#include "vvc/util.hpp"

namespace vvc {

namespace {

enum class BandWeight { sqrt_gap, inv_sqrt_gap };

// Integrals over the allowed region split at x0, under s = x_tp -/+ u^2 which
// regularizes both the sqrt zero of Phi's integrand and the inverse-sqrt
// blowup of T's.  The first sliver u in [0, u_c] is taken from the local model
// E - V = dv0 + w1 u^2 in closed form: close to the turning point the direct
// difference E - V(s) is pure cancellation noise.
double allowed_half(const Potential& pot, double E, double tp, double far, bool interior_root,
                    BandWeight kind, double abs_tol) {
  const double span = std::fabs(far - tp);
  if (span <= 0.0) return 0.0;
  const double sgn = (far > tp) ? 1.0 : -1.0;
  const double sE = std::sqrt(E);
  const double U = std::sqrt(span);
  const double u_c = std::min(1e-5 * std::sqrt(std::max(pot.L, 1.0)), 0.25 * U);

  // at an interior root the gap vanishes exactly; the measured value there is
  // rounding noise of size eps*V and must not enter the model
  const double dv0 = interior_root ? 0.0 : std::max(E - pot.V(tp), 0.0);
  const double delta = 1e-6 * std::max(pot.L, 1.0);
  const double s1 = tp + sgn * delta;
  const double w1 = std::max((E - pot.V(s1) - dv0) / delta, 1e-300);

  // closed-form value of the local model over [a,b], used for the sliver and
  // for scaling the per-segment noise tolerance
  auto model = [&](double a, double b) {
    const double ga = dv0 + w1 * a * a;
    const double gb = dv0 + w1 * b * b;
    if (kind == BandWeight::sqrt_gap)
      return (2.0 / (3.0 * w1)) * (std::pow(gb, 1.5) - std::pow(ga, 1.5));
    return (4.0 * sE / w1) * (std::sqrt(gb) - std::sqrt(ga));
  };
  double total = model(0.0, u_c);

  auto g = [&](double u) {
    const double s = tp + sgn * u * u;
    const double dv = std::max(E - pot.V(s), 0.0);
    if (kind == BandWeight::sqrt_gap) return 2.0 * u * std::sqrt(dv);
    return dv > 0.0 ? 4.0 * u * sE / std::sqrt(dv) : 0.0;
  };
  // geometric segments: E - V(s) carries absolute rounding noise ~ eps |V|,
  // so panels near the turning point cannot honestly beat the relative noise
  // floor eps Vscale / dv; budget each segment accordingly
  const double v_scale = std::max({std::fabs(E), std::fabs(pot.V(tp)), 1e-30});
  double a = u_c;
  while (a < U) {
    const double b = std::min(4.0 * a, U);
    const double dv_min = dv0 + w1 * a * a;
    const double noise_rel = 8.0 * 1e-16 * v_scale / dv_min;
    const double tol_seg =
        std::max(abs_tol * (b - a) / U, noise_rel * std::fabs(model(a, b)));
    total += integrate(g, a, b, tol_seg, 30);
    a = b;
  }
  return total;
}

double allowed_integral(const Potential& pot, double E, BandWeight kind, double abs_tol) {
  auto [xm, xp] = turning_points(pot, E);
  const bool left_root = E < pot.V0;
  const bool right_root = E < pot.VL;
  return allowed_half(pot, E, xm, pot.x0, left_root, kind, 0.5 * abs_tol) +
         allowed_half(pot, E, xp, pot.x0, right_root, kind, 0.5 * abs_tol);
}

}  // namespace

double phase_volume(const Potential& pot, double E, double abs_tol) {
  if (E < pot.E0 - 1e-14 * std::max(1.0, pot.E0))
    throw std::domain_error("phase_volume: energy below ground energy");
  if (E <= pot.E0) return 0.0;
  return allowed_integral(pot, E, BandWeight::sqrt_gap, abs_tol);
}

double period_integral(const Potential& pot, double E, double abs_tol) {
  if (E <= pot.E0) throw std::domain_error("period_integral: energy at or below ground energy");
  return allowed_integral(pot, E, BandWeight::inv_sqrt_gap, abs_tol);
}

double period_harmonic_limit(const Potential& pot) {
  if (pot.second_deriv_at_min <= 0.0)
    throw std::domain_error("period_harmonic_limit: V''(x0) must be positive");
  return 2.0 * M_PI * std::sqrt(pot.E0) / std::sqrt(0.5 * pot.second_deriv_at_min);
}

SupPeriod sup_period(const Potential& pot, double E_cap_factor) {
  const double E_cap = E_cap_factor * std::max(pot.Vmax, pot.E0);
  const double span = std::max(pot.Vmax - pot.E0, 0.1 * pot.E0);
  const double E_lo = pot.E0 + 1e-7 * span;

  auto Tof = [&](double E) { return period_integral(pot, E, 1e-11); };

  // dense sweep over the well band, coarse log sweep of the tail
  std::vector<double> Es = linspace(E_lo, pot.Vmax + 0.05 * span, 240);
  const std::vector<double> tail = logspace(pot.Vmax + 0.05 * span, E_cap, 40);
  Es.insert(Es.end(), tail.begin() + 1, tail.end());

  double bestE = Es[0], bestT = -1.0;
  std::vector<double> Tv(Es.size());
  for (std::size_t i = 0; i < Es.size(); ++i) {
    Tv[i] = Tof(Es[i]);
    if (Tv[i] > bestT) {
      bestT = Tv[i];
      bestE = Es[i];
    }
  }
  std::size_t ib = 0;
  for (std::size_t i = 0; i < Es.size(); ++i)
    if (Es[i] == bestE) ib = i;
  const double lo = Es[ib == 0 ? 0 : ib - 1];
  const double hi = Es[std::min(ib + 1, Es.size() - 1)];

  SupPeriod out;
  out.arg_E = hi > lo ? golden_max(Tof, lo, hi, 1e-10 * std::max(1.0, bestE)) : bestE;
  out.T1 = Tof(out.arg_E);
  // tail sanity: beyond the maximizer T should not rise again
  double prev = out.T1;
  for (double Et : logspace(std::max(out.arg_E * 1.2, pot.Vmax * 1.2), E_cap, 12)) {
    const double t = Tof(Et);
    if (t > prev + 1e-6 * prev) out.tail_monotone = false;
    prev = t;
  }
  return out;
}

PhiPrime::PhiPrime(const Potential& pot, double E_cap)
    : E0_(pot.E0), barrier_(pot.Vmax), E_cap_(E_cap) {
  auto dphi = [&](double x) { return period_integral(pot, x, 1e-11) / (4.0 * std::sqrt(x)); };

  const double span = std::max(barrier_ - E0_, 0.1 * E0_);
  std::vector<double> xs1 = linspace(E0_ + 1e-7 * span, barrier_, 220);
  std::vector<double> ys1(xs1.size());
  for (std::size_t i = 0; i < xs1.size(); ++i) ys1[i] = dphi(xs1[i]);
  below_ = CubicSpline(std::move(xs1), std::move(ys1));

  // above the barrier the density has a layer of width ~ (barrier - E0)
  // next to it; parametrize in z = log(x - E0) so the layer is resolved for
  // arbitrarily small convexity
  const double z_lo = std::log((barrier_ - E0_) * (1.0 + 1e-10));
  const double z_hi = std::log(E_cap - E0_);
  std::vector<double> zs = linspace(z_lo, z_hi, 400);
  std::vector<double> ys2(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) ys2[i] = dphi(E0_ + std::exp(zs[i]));
  above_ = CubicSpline(std::move(zs), std::move(ys2));

  // T(x) = 2L + (int V)/x + (3/4)(int V^2)/x^2 + O(x^-3) for x >> max V
  const auto Vf = pot.V;
  tail_c0_ = 2.0 * pot.L;
  tail_c1_ = integrate([&](double s) { return Vf(s); }, 0.0, pot.L, 1e-12);
  tail_c2_ = 0.75 * integrate([&](double s) { return sq(Vf(s)); }, 0.0, pot.L, 1e-12);
}

double PhiPrime::operator()(double x) const {
  if (x <= E0_) return 0.0;
  if (x <= barrier_) return below_.eval(x);
  if (x <= E_cap_) return above_.eval(std::log(x - E0_));
  return (tail_c0_ + tail_c1_ / x + tail_c2_ / (x * x)) / (4.0 * std::sqrt(x));
}

double interaction_time(const Potential& pot, const PhiPrime& dphi, double E, double B,
                        double abs_tol) {
  if (B < 0.0) throw std::invalid_argument("interaction_time: B must be >= 0");
  if (E < pot.E0 - 1e-12 * std::max(1.0, pot.E0))
    throw std::domain_error("interaction_time: energy below ground energy");

  const double cap = dphi.cap();
  auto integrand = [&](double x) {
    if (x == E) return 0.0;  // measure-zero log point
    // log1p form: the direct ratio loses all accuracy once x >> E
    const double lf = (x > E) ? std::log1p((2.0 * E + 2.0 * B) / (x - E))
                              : std::log((x + E + 2.0 * B) / (E - x));
    return lf * dphi(x);
  };

  // split points: ground, the log singularity at E, the barrier kink, the cap
  std::vector<double> splits{pot.E0, pot.Vmax, cap};
  const double w = std::max(0.05 * std::max(E - pot.E0, 0.0), 1e-3 * std::max(E, pot.E0));
  if (E > pot.E0 + 1e-14) {
    splits.push_back(std::max(E - w, pot.E0));
    splits.push_back(E);
    splits.push_back(std::min(E + w, cap));
  } else {
    splits.push_back(std::min(pot.E0 + w, cap));
  }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    const double lo = splits[i], hi = splits[i + 1];
    if (hi <= lo) continue;
    const bool sing_lo = std::fabs(lo - E) < 1e-300 || (E <= pot.E0 + 1e-14 && i == 0);
    const bool sing_hi = std::fabs(hi - E) < 1e-300;
    if (sing_lo)
      total += integrate_endpoint_singular(integrand, lo, hi, /*sing_at_b=*/false, abs_tol / 6);
    else if (sing_hi)
      total += integrate_endpoint_singular(integrand, lo, hi, /*sing_at_b=*/true, abs_tol / 6);
    else
      total += integrate(integrand, lo, hi, abs_tol / 6);
  }
  // exact tail: x = cap / t^2 maps (0,1] onto [cap, inf)
  auto tail = [&](double t) {
    const double x = cap / (t * t);
    return integrand(x) * 2.0 * cap / (t * t * t);
  };
  total += integrate_endpoint_singular(tail, 0.0, 1.0, /*sing_at_b=*/false, abs_tol / 6);
  return total / M_PI;
}

double interaction_time(const Potential& pot, double E, double B) {
  const double cap = std::max(50.0 * std::max(pot.Vmax, pot.E0), 8.0 * (E + 2.0 * B));
  PhiPrime dphi(pot, cap);
  return interaction_time(pot, dphi, E, B);
}

double gamma0(double alpha, double beta) {
  if (!(beta >= 1.0) || !(alpha >= beta))
    throw std::domain_error("gamma0: need 1 <= beta <= alpha");
  double beta_part;
  if (beta - 1.0 < 1e-14) {
    beta_part = 2.0 * std::log(2.0);  // continuous extension at beta = 1
  } else {
    beta_part = (1.0 + beta) * std::log(beta + 1.0) - (beta - 1.0) * std::log(beta - 1.0);
  }
  return M_PI * alpha - std::log(1.0 + alpha * alpha) - 2.0 * alpha * std::atan(1.0 / alpha) +
         beta_part;
}

Kappa0 kappa0(std::size_t n_alpha, std::size_t n_beta) {
  auto obj = [](double alpha, double beta) {
    beta = std::clamp(beta, 1.0, alpha);  // guard golden-section rounding
    return gamma0(alpha, beta) / (alpha * alpha + beta * beta);
  };
  Kappa0 best;
  best.value = -1.0;
  for (double alpha : logspace(1.0, 1e3, n_alpha)) {
    for (std::size_t j = 0; j < n_beta; ++j) {
      const double beta = 1.0 + (alpha - 1.0) * static_cast<double>(j) /
                                    static_cast<double>(n_beta - 1);
      const double v = obj(alpha, beta);
      if (v > best.value) {
        best.value = v;
        best.alpha = alpha;
        best.beta = beta;
      }
    }
  }
  // coordinate-wise golden refinement inside the wedge
  for (int round = 0; round < 4; ++round) {
    const double a_lo = std::max(1.0, 0.5 * best.alpha);
    const double a_hi = 2.0 * best.alpha;
    best.alpha = golden_max([&](double a) { return obj(a, std::min(best.beta, a)); }, a_lo, a_hi,
                            1e-9);
    best.beta = golden_max([&](double b) { return obj(best.alpha, std::min(b, best.alpha)); },
                           1.0, best.alpha, 1e-9);
    best.value = obj(best.alpha, best.beta);
  }
  best.value /= 2.0 * M_PI * std::sqrt(2.0);
  return best;
}

namespace {

std::vector<double> table_energies(const Potential& pot, std::size_t n, double E_cap) {
  const double span = std::max(pot.Vmax - pot.E0, 0.1 * pot.E0);
  const std::size_t n_band = (2 * n) / 3;
  std::vector<double> Es = linspace(pot.E0 + 1e-7 * span, pot.Vmax + 0.02 * span, n_band);
  const std::vector<double> tail = logspace(pot.Vmax + 0.02 * span, E_cap, n - n_band + 1);
  Es.insert(Es.end(), tail.begin() + 1, tail.end());
  return Es;
}

template <class Loop>
ClassicalTable build_table_impl(const Potential& pot, std::size_t n, double E_cap_factor,
                                Loop&& loop) {
  ClassicalTable tab;
  tab.E_cap = E_cap_factor * std::max(pot.Vmax, pot.E0);
  tab.E = table_energies(pot, n, tab.E_cap);
  tab.phi.assign(tab.E.size(), 0.0);
  tab.period.assign(tab.E.size(), 0.0);
  tab.calT.assign(tab.E.size(), 0.0);
  loop(tab.E.size(), [&](std::size_t i) {
    const double E = tab.E[i];
    tab.phi[i] = phase_volume(pot, E, 1e-11);
    tab.period[i] = period_integral(pot, E, 1e-11);
    tab.calT[i] = tab.period[i] / (2.0 * std::sqrt(E));
  });
  const SupPeriod sp = sup_period(pot, E_cap_factor);
  tab.T1 = sp.T1;
  tab.T1_arg = sp.arg_E;
  return tab;
}

}  // namespace

ClassicalTable build_table(const Potential& pot, std::size_t n_energies, double E_cap_factor) {
  return build_table_impl(pot, n_energies, E_cap_factor,
                          [](std::size_t n, auto&& f) { par::for_index(n, f); });
}

ClassicalTable build_table_serial(const Potential& pot, std::size_t n_energies,
                                  double E_cap_factor) {
  return build_table_impl(pot, n_energies, E_cap_factor,
                          [](std::size_t n, auto&& f) { par::for_index_serial(n, f); });
}

double invert_phase_volume(const Potential& pot, const ClassicalTable& table, double target) {
  if (target <= 0.0) return pot.E0;
  if (target >= table.phi.back())
    throw std::domain_error("invert_phase_volume: target beyond tabulated range");
  auto it = std::lower_bound(table.phi.begin(), table.phi.end(), target);
  const std::size_t i = static_cast<std::size_t>(it - table.phi.begin());
  const double lo = (i == 0) ? pot.E0 : table.E[i - 1];
  const double hi = table.E[i];
  return find_root([&](double E) { return phase_volume(pot, E, 1e-11) - target; },
                   lo, hi, 1e-12 * std::max(1.0, hi));
}

}  // namespace vvc
