#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "vvc/logval.hpp"
#include "vvc/quadrature.hpp"
#include "vvc/rootfind.hpp"
#include "vvc/spline.hpp"
#include "vvc/util.hpp"

using namespace vvc;

TEST_CASE("adaptive quadrature on smooth and singular integrands") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // integrable log singularity at the left endpoint
  const double v = integrate_endpoint_singular([](double x) { return std::log(x); }, 0.0, 1.0,
                                               false, 1e-12);
  CHECK(v == doctest::Approx(-1.0).epsilon(1e-10));
  // decaying tail
  const double t = integrate_to_infinity([](double x) { return std::pow(x, -1.5); }, 1.0, 1.0,
                                         1e-12);
  CHECK(t == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("gauss-legendre rules") {
  const QuadNodes& q = gauss_legendre(16);
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], 30);
  CHECK(s == doctest::Approx(2.0 / 31.0).epsilon(1e-13));  // degree-30 monomial

  MappedQuad m = composite_gl(0.0, 1.0, 64, 16);
  double osc = 0.0;
  for (std::size_t i = 0; i < m.x.size(); ++i) osc += m.w[i] * std::sin(50.0 * m.x[i]);
  CHECK(osc == doctest::Approx((1.0 - std::cos(50.0)) / 50.0).epsilon(1e-12));
}

TEST_CASE("signed log-space values") {
  LogVal a = LogVal::from(3.0), b = LogVal::from(-2.0);
  CHECK((a * b).value() == doctest::Approx(-6.0));
  CHECK((a + b).value() == doctest::Approx(1.0));
  CHECK((b - b).is_zero());
  LogVal big = LogVal::exp_of(1000.0) + LogVal::exp_of(999.0);
  CHECK(big.lg == doctest::Approx(1000.0 + std::log1p(std::exp(-1.0))));
  CHECK((LogVal::exp_of(5000.0) / LogVal::exp_of(4990.0)).value() ==
        doctest::Approx(std::exp(10.0)));
}

TEST_CASE("natural cubic spline interpolates and differentiates") {
  const std::size_t n = 60;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(i) / (n - 1) * 3.0;
    ys[i] = std::sin(xs[i]);
  }
  CubicSpline sp(xs, ys);
  CHECK(sp.eval(1.37) == doctest::Approx(std::sin(1.37)).epsilon(1e-6));
  CHECK(sp.deriv(1.37) == doctest::Approx(std::cos(1.37)).epsilon(1e-4));
  // exactly linear data is reproduced
  std::vector<double> yl(n);
  for (std::size_t i = 0; i < n; ++i) yl[i] = 2.0 * xs[i] + 1.0;
  CubicSpline lin(xs, yl);
  CHECK(lin.eval(2.11) == doctest::Approx(2.0 * 2.11 + 1.0).epsilon(1e-13));
  CHECK(lin.deriv2(1.0) == doctest::Approx(0.0));
}

TEST_CASE("root finding and golden section") {
  CHECK(find_root([](double x) { return std::cos(x); }, 0.0, 2.0) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-11));
  CHECK(golden_min([](double x) { return (x - 1.3) * (x - 1.3); }, 0.0, 3.0) ==
        doctest::Approx(1.3).epsilon(1e-8));
  CHECK(grid_refine_max([](double x) { return -std::fabs(x - 0.77); }, 0.0, 1.0, 101) ==
        doctest::Approx(0.77).epsilon(1e-7));
}

TEST_CASE("line fit") {
  std::vector<double> x{1, 2, 3, 4, 5}, y;
  for (double xi : x) y.push_back(2.0 * xi + 1.0);
  LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}
