#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "vvc/bounds.hpp"
#include "vvc/util.hpp"

using namespace vvc;

namespace {

VectorField field(double M, double a, Sign s, double L) {
  return make_example_field(M, a, s, L);
}

// f^+(L/2) in centered coordinates: the closed-form boundary value
double fplus_half(double M, double a, double L) {
  return (L / 8.0) * std::sqrt(a * a * L * L + 4.0 * M * M) +
         (M * M / (2.0 * a)) * std::asinh(a * L / (2.0 * M));
}

}  // namespace

TEST_CASE("flushing time of the limit equation") {
  CHECK(limit_transport_time(field(1, 1, Sign::plus, 2)) ==
        doctest::Approx(2.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-10));
  // closed form (2/a) asinh(aL/2M), and the a -> 0 limit L/M
  CHECK(limit_transport_time(field(1, 2, Sign::minus, 2)) ==
        doctest::Approx(std::asinh(2.0)).epsilon(1e-10));
  CHECK(limit_transport_time(field(1, 1e-3, Sign::plus, 2)) ==
        doctest::Approx(2.0).epsilon(1e-5));
  // vanishing speed: infinite flushing time is reported as a violation
  std::vector<double> xs = linspace(0.0, 2.0, 64), fs(64);
  for (std::size_t i = 0; i < 64; ++i) fs[i] = std::cos(M_PI * xs[i]);
  CHECK_THROWS_AS(limit_transport_time(make_tabulated_field(xs, fs)), AssumptionViolation);
}

TEST_CASE("geometric constants at the ground energy") {
  BoundsContext minus(field(1, 2, Sign::minus, 2));
  GeometricConstants g = minus.constants(0.25, 0.0);
  CHECK(g.G14 == doctest::Approx(1.47894285754459).epsilon(1e-8));
  CHECK(g.G15 == doctest::Approx(1.0).epsilon(1e-8));  // a L^2 / 8
  CHECK(g.G16 == doctest::Approx(g.G14));
  CHECK(g.S14 == 0.0);
  CHECK(g.S16 == doctest::Approx(2.0 * std::sqrt(2.0) * 0.5 * M_PI * std::sqrt(5.0)).epsilon(1e-7));

  BoundsContext plus(field(1, 2, Sign::plus, 2));
  GeometricConstants gp = plus.constants(0.25, 0.0);
  CHECK(std::fabs(gp.G14) < 1e-8);
  CHECK(gp.G15 == doctest::Approx(1.0 - fplus_half(1, 2, 2)).epsilon(1e-7));
  CHECK(gp.G15 < 0.0);
}

TEST_CASE("comparison chain between the constants") {
  BoundsContext ctx(field(1, 2, Sign::minus, 2));
  const double E0 = ctx.pot().E0;
  const double k0 = kappa0().value;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uE(E0, ctx.pot().Vmax), uB(0.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const double E = uE(rng), B = uB(rng);
    GeometricConstants g = ctx.constants(E, B);
    CHECK(g.G14 / E0 >= g.G14 / E - 1e-12);
    CHECK(g.G14 / E >= g.G15 / (E + B) - 1e-12);
    CHECK(g.S15 >= 0.0);
    CHECK(g.S15 / (E + B) <= k0 * g.S16 / E0 + 1e-10);
  }
}

TEST_CASE("boundary drop of the co-weight is nonincreasing in energy") {
  BoundsContext ctx(field(1, 2, Sign::minus, 2));
  double prev = std::numeric_limits<double>::infinity();
  for (double E : linspace(0.25, 1.25, 20)) {
    const double g15 = ctx.G15(E);
    CHECK(g15 <= prev + 1e-10);
    prev = g15;
  }
}

TEST_CASE("lower bound from single energies") {
  BoundsContext minus(field(1, 2, Sign::minus, 2));
  SupResult r = lower_bound_T14(minus);
  CHECK(r.value == doctest::Approx(1.47894285754459 / 0.25).epsilon(1e-7));
  // odd antiderivative: drop constant in E, 1/E decreasing => argmax at E0
  CHECK(r.arg_E == doctest::Approx(0.25).epsilon(1e-4));

  BoundsContext plus(field(1, 2, Sign::plus, 2));
  CHECK(std::fabs(lower_bound_T14(plus).value) < 1e-7);

  // large convexity: T14 ~ (a/2) L^2/M^2
  BoundsContext steep(field(1, 50, Sign::minus, 2));
  CHECK(lower_bound_T14(steep).value ==
        doctest::Approx(0.5 * 50.0 * 4.0).epsilon(0.05));
}

TEST_CASE("two-parameter lower bound") {
  BoundsContext ctx(field(1, 2, Sign::minus, 2));
  SupResultEB r = lower_bound_T15(ctx);
  CHECK(r.value > 0.0);
  CHECK_FALSE(r.B_at_boundary);
  // sup over a larger B range can only grow
  BoundsContext wide(field(1, 2, Sign::minus, 2), 30.0);
  CHECK(lower_bound_T15(wide).value >= r.value - 1e-9);

  // the q_f = 0 hypothesis is enforced
  VectorField with_q = make_example_field_with_q(1.0, 2.0, Sign::minus, 2.0,
                                                 [](double) { return 0.0; });
  BoundsContext qctx(with_q);
  CHECK_THROWS_AS(lower_bound_T15(qctx), AssumptionViolation);
}

TEST_CASE("upper bound on the uniform control time") {
  BoundsContext plus(field(1, 2, Sign::plus, 2));
  // increasing field: (2 sqrt2 / sqrt(E0)) T1 = 4 sqrt2 T1 / a(x0)
  CHECK(upper_bound_T16(plus) ==
        doctest::Approx(4.0 * std::sqrt(2.0) * M_PI * std::sqrt(5.0)).epsilon(1e-7));
  BoundsContext minus(field(1, 2, Sign::minus, 2));
  const double T16 = upper_bound_T16(minus);
  CHECK(T16 == doctest::Approx((1.47894285754459 +
                                2.0 * std::sqrt(2.0) * 0.5 * M_PI * std::sqrt(5.0)) /
                               0.25)
                   .epsilon(1e-7));
  // sandwich on a small grid
  for (double M : {0.5, 2.0}) {
    for (double a : {1.0, 4.0}) {
      BoundsContext c(field(M, a, Sign::minus, 1));
      CHECK(lower_bound_T14(c).value <= upper_bound_T16(c) + 1e-9);
      CHECK(lower_bound_T15(c).value <= upper_bound_T16(c) + 1e-9);
    }
  }
}

TEST_CASE("cost exponent of the upper bound theorem") {
  BoundsContext ctx(field(1, 2, Sign::minus, 2));
  const double T1 = ctx.T1();
  const double T16 = upper_bound_T16(ctx);
  // m -> 0 limit
  const double g0 = cost_exponent_upper(ctx, 3.0, 0.0, 1e-9);
  CHECK(g0 == doctest::Approx(2.0 * T1 * T1 / 3.0 + 1.47894285754459).epsilon(1e-6));
  // beyond the threshold time the minimized exponent is negative
  double best = std::numeric_limits<double>::infinity();
  for (double m : linspace(0.0, 0.95, 60))
    best = std::min(best, cost_exponent_upper(ctx, 1.05 * T16, m, 1e-9));
  CHECK(best < 0.0);
  CHECK_THROWS_AS(cost_exponent_upper(ctx, 3.0, 1.5, 0.1), std::domain_error);
}

TEST_CASE("closed-form minimization of the dissipation split") {
  MinimizeF r = minimize_F(1.0, 4.0);
  CHECK(r.m_star == doctest::Approx(0.5));
  CHECK(r.value == doctest::Approx(0.0));
  r = minimize_F(4.0, 1.0);
  CHECK(r.m_star == 0.0);
  CHECK(r.value == doctest::Approx(4.0));
  // dense grid oracle on random coefficients
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), b = u(rng);
    auto F = [&](double m) { return a / (1.0 - m) - b * m; };
    auto [m_grid, v_grid] = oracle::grid_min(F, 0.0, 1.0 - 1e-9, 200000);
    MinimizeF mf = minimize_F(a, b);
    CHECK(mf.value == doctest::Approx(v_grid).epsilon(1e-8));
    (void)m_grid;
  }
}

TEST_CASE("threshold time of the sign change") {
  CHECK(threshold_time(1.0, 1.0, 1.0) == doctest::Approx(3.0));
  CHECK(threshold_time(1.0, 1.0, 0.0) == doctest::Approx(2.0));
  auto G = [](double a, double b, double c, double T) {
    return minimize_F(a / T, b * T).value + c;
  };
  CHECK(G(1, 1, 1, 2.9) > 0.0);
  CHECK(G(1, 1, 1, 3.1) < 0.0);
  // with a = 2 T1^2, b = E0, c = sup G14 this reproduces the T16 threshold
  BoundsContext ctx(field(1, 2, Sign::minus, 2));
  const double supG = ctx.G14(ctx.pot().E0);
  CHECK(threshold_time(2.0 * sq(ctx.T1()), ctx.pot().E0, supG) ==
        doctest::Approx(upper_bound_T16(ctx)).epsilon(1e-7));
}

TEST_CASE("bound outputs are invariant under constant shifts") {
  VectorField src = field(1, 2, Sign::minus, 2);
  std::vector<double> xs = linspace(0.0, 2.0, 800), f0(xs.size()), f5(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    f0[i] = src.f(xs[i]);
    f5[i] = src.f(xs[i]) - 3.0;
  }
  BoundsContext c0(make_tabulated_field(xs, f0));
  BoundsContext c5(make_tabulated_field(xs, f5));
  CHECK(lower_bound_T14(c0).value == doctest::Approx(lower_bound_T14(c5).value).epsilon(1e-8));
  CHECK(upper_bound_T16(c0) == doctest::Approx(upper_bound_T16(c5)).epsilon(1e-8));
}

TEST_CASE("report assembly") {
  BoundsReport rep = bounds_report(field(1, 2, Sign::minus, 2));
  CHECK(rep.case_sign == CaseSign::decreasing);
  CHECK(rep.T_limit == doctest::Approx(std::asinh(2.0)).epsilon(1e-9));
  CHECK(rep.T14.value <= rep.T16);
  CHECK(rep.T15.value <= rep.T16);
  CHECK(rep.kappa0_value > 0.0);
  CHECK(rep.m_star > 0.0);
}
