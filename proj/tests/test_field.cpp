#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "vvc/field.hpp"
#include "vvc/util.hpp"

using namespace vvc;

namespace {

// tabulated copy of the example family, optionally shifted by a constant
VectorField tabulated_example(double M, double a, Sign s, double L, double shift = 0.0,
                              std::size_t n = 400) {
  VectorField src = make_example_field(M, a, s, L);
  std::vector<double> xs = linspace(0.0, L, n), fs(n);
  for (std::size_t i = 0; i < n; ++i) fs[i] = src.f(xs[i]) + shift;
  return make_tabulated_field(xs, fs);
}

}  // namespace

TEST_CASE("example family closed forms") {
  VectorField vf = make_example_field(1.0, 1.0, Sign::plus, 2.0);
  CHECK(vf.a(1.0) == doctest::Approx(1.0));          // speed at the center
  CHECK(vf.V(1.0) == doctest::Approx(0.25));         // V(x0) = M^2/4
  CHECK(vf.f(0.0) == doctest::Approx(0.0));

  VectorField vm = make_example_field(1.0, 2.0, Sign::minus, 2.0);
  CHECK(vm.a(2.0) == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-14));
  CHECK(vm.qf(0.3) == doctest::Approx(0.0));
  CHECK(vm.q(0.7) == doctest::Approx(0.5 * vm.ddf(0.7)));

  CHECK_THROWS_AS(make_example_field(0.0, 1.0, Sign::plus, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_example_field(1.0, -0.5, Sign::plus, 2.0), std::invalid_argument);
}

TEST_CASE("assumption checks on the example family") {
  for (Sign s : {Sign::plus, Sign::minus}) {
    VectorField vf = make_example_field(1.0, 2.0, s, 2.0);
    AssumptionReport rep = validate_assumptions(vf);
    CHECK(rep.a1.pass);
    CHECK(rep.a2.pass);
    CHECK(rep.a4.pass);
    CHECK(rep.x0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.case_sign == (s == Sign::plus ? CaseSign::increasing : CaseSign::decreasing));
    // the family is symmetric: V(0) = V(L) exactly, so item 3 is only advisory
    CHECK_FALSE(rep.a3.pass);
    CHECK(rep.hard_pass());
  }
}

TEST_CASE("flat potential fails the single-well items") {
  VectorField vf = make_example_field(1.0, 0.0, Sign::plus, 2.0);
  AssumptionReport rep = validate_assumptions(vf);
  CHECK(rep.a1.pass);
  CHECK_FALSE(rep.a2.pass);
  CHECK_FALSE(rep.a4.pass);
  CHECK_THROWS_AS(potential(vf), AssumptionViolation);
}

TEST_CASE("double-well tabulated field reports multiple critical points") {
  const double L = 2.0;
  const std::size_t n = 200;
  std::vector<double> xs = linspace(0.0, L, n), fs(n);
  // speed 2 + cos(4 pi x / L): V' vanishes at three interior points
  for (std::size_t i = 0; i < n; ++i)
    fs[i] = 2.0 * xs[i] + (L / (4.0 * M_PI)) * std::sin(4.0 * M_PI * xs[i] / L);
  VectorField vf = make_tabulated_field(xs, fs);
  AssumptionReport rep = validate_assumptions(vf);
  CHECK(rep.a1.pass);
  CHECK_FALSE(rep.a2.pass);
  CHECK(rep.a2.witnesses.size() >= 2);
}

TEST_CASE("potential extraction") {
  VectorField vf = make_example_field(1.0, 2.0, Sign::plus, 2.0);
  Potential pot = potential(vf);
  CHECK(pot.E0 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pot.x0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pot.second_deriv_at_min == doctest::Approx(2.0).epsilon(1e-5));  // a^2/2

  VectorField v2 = make_example_field(2.0, 1.0, Sign::plus, 2.0);
  Potential p2 = potential(v2);
  CHECK(p2.VL == doctest::Approx(1.25).epsilon(1e-14));  // (a^2 L^2/4 + M^2)/4
}

TEST_CASE("potential is invariant under constant shifts of f") {
  VectorField base = tabulated_example(1.0, 2.0, Sign::minus, 2.0, 0.0);
  VectorField shifted = tabulated_example(1.0, 2.0, Sign::minus, 2.0, 5.0);
  Potential p1 = potential(base), p2 = potential(shifted);
  CHECK(p1.E0 == doctest::Approx(p2.E0).epsilon(1e-12));
  CHECK(p1.x0 == doctest::Approx(p2.x0).epsilon(1e-9));
  CHECK(p1.V0 == doctest::Approx(p2.V0).epsilon(1e-12));
}

TEST_CASE("tabulated spline tracks the closed form in the interior") {
  VectorField tab = tabulated_example(1.0, 2.0, Sign::minus, 2.0);
  VectorField ref = make_example_field(1.0, 2.0, Sign::minus, 2.0);
  for (double x : {0.3, 0.9, 1.0, 1.42, 1.8}) {
    CHECK(tab.f(x) == doctest::Approx(ref.f(x)).epsilon(1e-8));
    CHECK(tab.a(x) == doctest::Approx(ref.a(x)).epsilon(1e-5));
  }
  CHECK(tab.V(1.0) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("tabulated construction guards") {
  std::vector<double> xs = linspace(0.0, 1.0, 8), ys(8, 0.0);
  CHECK_THROWS_AS(make_tabulated_field(xs, ys), std::invalid_argument);  // too few samples
  xs = linspace(0.0, 1.0, 20);
  ys.assign(20, 0.0);
  std::vector<double> bad = xs;
  bad[5] = bad[4];  // not strictly increasing
  CHECK_THROWS_AS(make_tabulated_field(bad, ys), std::invalid_argument);
}
