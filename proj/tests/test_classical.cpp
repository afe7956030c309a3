#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "vvc/classical.hpp"
#include "vvc/util.hpp"

using namespace vvc;

namespace {

VectorField minus_field(double M = 1.0, double a = 2.0, double L = 2.0) {
  return make_example_field(M, a, Sign::minus, L);
}

// Independent reference for the interaction integral, using the explicit
// two-branch density of the example family.  The log singularity at x = E is
// removed by an exact sliver, the far tail by a 1/x substitution.
double teb_reference(double M, double a, double L, double E, double B) {
  const double E0 = M * M / 4.0;
  const double barrier = a * a * L * L / 16.0 + M * M / 4.0;
  auto dens = [&](double x) {
    if (x <= barrier) return M_PI / a;
    return (2.0 / a) * std::asin(a * L / (2.0 * std::sqrt(4.0 * x - M * M)));
  };
  auto f = [&](double x) {
    return std::log(std::fabs((x + E + 2.0 * B) / (x - E))) * dens(x);
  };
  const double X = 1e6;
  const double dlt = 1e-5;
  double total = 0.0;
  // pieces split at the (possible) singularity and at the density kink
  std::vector<double> cuts{E0, barrier, X};
  if (E > E0 + dlt) {
    cuts.push_back(E - dlt);
    cuts.push_back(E + dlt);
  } else {
    cuts.push_back(E0 + dlt);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi <= lo) continue;
    if (lo >= E - 1.5 * dlt && hi <= E + 1.5 * dlt) continue;  // sliver handled below
    total += oracle::romberg(f, lo, hi, 24, 1e-11);
  }
  // exact sliver around x = E: integrand ~ [log(2E+2B) - log|x-E|] dens(E)
  if (E > E0 + dlt) {
    total += dens(E) * 2.0 * dlt * (std::log(2.0 * E + 2.0 * B) + 1.0 - std::log(dlt));
  } else {
    total += dens(E0 + dlt) * dlt * (std::log(2.0 * E + 2.0 * B) + 1.0 - std::log(dlt));
  }
  // tail x > X via x = 1/t
  total += oracle::romberg([&](double t) { return f(1.0 / t) / (t * t); }, 1e-12, 1.0 / X, 24,
                           1e-12);
  return total / M_PI;
}

}  // namespace

TEST_CASE("phase volume on the harmonic branch") {
  Potential pot = potential(minus_field());
  // Phi(E) = (pi/a)(E - M^2/4) while the band stays off the walls
  CHECK(phase_volume(pot, 0.5) == doctest::Approx(M_PI / 8.0).epsilon(1e-9));
  CHECK(phase_volume(pot, pot.E0) == 0.0);
  // at the barrier the outer branch gives Phi = pi/2 for these parameters
  CHECK(phase_volume(pot, 1.25) == doctest::Approx(M_PI / 2.0).epsilon(1e-8));
  // cross-check against a plain oracle above the barrier
  const double E = 3.0;
  const double ref = oracle::simpson(
      [&](double x) { return std::sqrt(std::max(E - pot.V(x), 0.0)); }, 0.0, 2.0, 1 << 15);
  CHECK(phase_volume(pot, E) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("orbit quantity T(E)") {
  Potential pot = potential(minus_field());
  // harmonic branch: T = 4 pi sqrt(E) / a
  CHECK(period_integral(pot, 0.5) ==
        doctest::Approx(4.0 * M_PI * std::sqrt(0.5) / 2.0).epsilon(1e-9));
  // at the barrier: 2 pi sqrt(barrier * 4) / a ... = pi sqrt 5 here
  CHECK(period_integral(pot, 1.25) == doctest::Approx(M_PI * std::sqrt(5.0)).epsilon(1e-7));
  // large energy limit 2L
  CHECK(period_integral(pot, 125.0) == doctest::Approx(4.0).epsilon(1e-2));
  CHECK_THROWS_AS(period_integral(pot, pot.E0), std::domain_error);
  // harmonic limit at the ground energy: 2 pi sqrt(E0) / sqrt(V''/2) = pi
  CHECK(period_harmonic_limit(pot) == doctest::Approx(M_PI).epsilon(1e-5));
  CHECK(period_integral(pot, pot.E0 * 1.0001) == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("sup of T(E)") {
  Potential pot = potential(minus_field());
  SupPeriod sp = sup_period(pot);
  CHECK(sp.T1 == doctest::Approx(M_PI * std::sqrt(5.0)).epsilon(1e-8));
  CHECK(sp.arg_E == doctest::Approx(1.25).epsilon(1e-3));
  CHECK(sp.tail_monotone);

  // very convex fields approach T1 = pi L
  Potential steep = potential(minus_field(1.0, 50.0, 2.0));
  SupPeriod sp2 = sup_period(steep);
  CHECK(sp2.T1 == doctest::Approx(M_PI * 2.0).epsilon(5e-4));
}

TEST_CASE("density identity: finite difference of Phi matches T/(4 sqrt E)") {
  Potential pot = potential(minus_field());
  for (double E : {0.35, 0.6, 0.95, 2.0, 5.0}) {
    const double h = 1e-4 * E;
    const double fd = (phase_volume(pot, E + h) - phase_volume(pot, E - h)) / (2.0 * h);
    const double direct = period_integral(pot, E) / (4.0 * std::sqrt(E));
    CHECK(fd == doctest::Approx(direct).epsilon(1e-5));
  }
}

TEST_CASE("weyl tail of the phase volume") {
  Potential pot = potential(minus_field());
  const double E = 100.0 * pot.Vmax;
  CHECK(phase_volume(pot, E) / (pot.L * std::sqrt(E)) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("interaction term against the explicit-density oracle") {
  const double M = 1.0, a = 2.0, L = 2.0;
  Potential pot = potential(minus_field(M, a, L));
  const double E = 0.6, B = 0.3;
  const double ref = teb_reference(M, a, L, E, B);
  CHECK(interaction_time(pot, E, B) == doctest::Approx(ref).epsilon(2e-4));
}

TEST_CASE("interaction term limits in the convexity parameter") {
  const double M = 1.0, L = 2.0;
  // a -> 0: T_{E0,B} -> (L/2) sqrt(2 M^2 + 8 B)
  Potential flatish = potential(minus_field(M, 1e-3, L));
  CHECK(interaction_time(flatish, flatish.E0, 0.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
  CHECK(interaction_time(flatish, flatish.E0, 0.25) == doctest::Approx(2.0).epsilon(0.01));
  // monotone in B
  Potential pot = potential(minus_field(M, 2.0, L));
  double prev = -1.0;
  for (double B : {0.0, 0.2, 0.5, 1.0, 2.0}) {
    const double v = interaction_time(pot, pot.E0, B);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(interaction_time(pot, pot.E0, -0.1), std::invalid_argument);
}

TEST_CASE("wedge integral closed form") {
  CHECK(gamma0(1.0, 1.0) == doctest::Approx(M_PI / 2.0 + std::log(2.0)).epsilon(1e-14));
  // quadrature oracle: split log(y^2+a^2) - log(y+b) - log|y-b|; the last term
  // integrates exactly over the sliver around y = b, the tail uses y = 1/t
  auto gamma_ref = [](double alpha, double beta) {
    const double Y = 1e7;
    const double w = 1e-4;
    auto full = [&](double y) {
      return std::log(std::fabs((y * y + alpha * alpha) / (y * y - beta * beta)));
    };
    auto smooth = [&](double y) {
      return std::log(y * y + alpha * alpha) - std::log(y + beta);
    };
    auto prim = [&](double y) {  // antiderivative of log|y - beta|
      const double r = y - beta;
      return (r == 0.0) ? 0.0 : r * std::log(std::fabs(r)) - r;
    };
    double s = 0.0;
    double start;
    if (beta > 1.0 + w) {
      s += oracle::romberg(full, 1.0, beta - w, 22, 1e-12);
      s += oracle::romberg(smooth, beta - w, beta + w, 16, 1e-13);
      s -= prim(beta + w) - prim(beta - w);
      start = beta + w;
    } else {
      const double b_hi = std::max(beta, 1.0) + w;
      s += oracle::romberg(smooth, 1.0, b_hi, 16, 1e-13);
      s -= prim(b_hi) - prim(1.0);
      start = b_hi;
    }
    // window [start, Y] under y = beta + e^v so the log edge is resolved
    const double v_lo = std::log(start - beta), v_hi = std::log(Y - beta);
    s += oracle::romberg(
        [&](double v) {
          const double ev = std::exp(v);
          return full(beta + ev) * ev;
        },
        v_lo, v_hi, 24, 1e-12);
    // tail beyond Y: leading term of log(1 + (a^2+b^2)/(y^2-b^2))
    const double c = alpha * alpha + beta * beta;
    s += (c / (2.0 * beta)) * std::log((Y + beta) / (Y - beta));
    return s;
  };
  for (auto [al, be] : std::vector<std::pair<double, double>>{
           {2.0, 1.5}, {3.0, 2.0}, {5.0, 1.2}, {2.0, 1.0}, {1.5, 1.4999}}) {
    CHECK(gamma0(al, be) == doctest::Approx(gamma_ref(al, be)).epsilon(1e-7));
  }
  // nonnegative on the admissible wedge
  for (double al : {1.0, 1.5, 3.0, 10.0})
    for (double be : {1.0, 1.2, al}) {
      if (be > al) continue;
      CHECK(gamma0(al, be) >= 0.0);
    }
  CHECK_THROWS_AS(gamma0(1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(gamma0(2.0, 0.5), std::domain_error);
}

TEST_CASE("kappa0 is positive, stable, and attained at finite arguments") {
  Kappa0 k1 = kappa0(160, 80);
  Kappa0 k2 = kappa0(320, 160);
  CHECK(k1.value > 0.0);
  CHECK(std::fabs(k1.value - k2.value) < 1e-4);
  // decay along the beta = 1 edge
  auto edge = [](double alpha) { return gamma0(alpha, 1.0) / (alpha * alpha + 1.0); };
  CHECK(edge(10.0) > edge(100.0));
  CHECK(edge(100.0) > edge(1000.0));
  CHECK(k1.alpha < 10.0);
}

TEST_CASE("classical table and inversion") {
  Potential pot = potential(minus_field());
  ClassicalTable tab = build_table_serial(pot, 200);
  CHECK(tab.T1 == doctest::Approx(M_PI * std::sqrt(5.0)).epsilon(1e-7));
  // strictly increasing Phi, calT consistency
  for (std::size_t i = 1; i < tab.E.size(); ++i) CHECK(tab.phi[i] > tab.phi[i - 1]);
  for (std::size_t i = 0; i < tab.E.size(); i += 37)
    CHECK(tab.calT[i] == doctest::Approx(tab.period[i] / (2.0 * std::sqrt(tab.E[i]))));
  const double E = 0.8;
  CHECK(invert_phase_volume(pot, tab, phase_volume(pot, E)) ==
        doctest::Approx(E).epsilon(1e-9));
}
