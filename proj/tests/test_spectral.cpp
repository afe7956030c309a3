#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "vvc/spectral.hpp"
#include "vvc/util.hpp"

using namespace vvc;

namespace {
VectorField preset() { return make_example_field(1.0, 2.0, Sign::minus, 2.0); }
}  // namespace

TEST_CASE("flat potential diagonalizes against discrete sines") {
  VectorField flat = make_example_field(1.0, 0.0, Sign::plus, 2.0);
  const double eps = 0.1;
  const std::size_t n = 255;
  OperatorDiscretization d = discretize(flat, eps, n);
  std::vector<double> lam = eigenvalues_bisect(d, 20, false);
  for (std::size_t k = 0; k < 20; ++k) {
    const double exact = 0.25 + (2.0 * eps * eps / (d.h * d.h)) *
                                    (1.0 - std::cos((k + 1) * M_PI * d.h / d.L));
    CHECK(lam[k] == doctest::Approx(exact).epsilon(1e-11));
  }
}

TEST_CASE("discretization guards") {
  VectorField vf = preset();
  CHECK_THROWS_AS(discretize(vf, 0.05, 32), std::invalid_argument);
  OperatorDiscretization d = discretize(vf, 0.05, 256);
  CHECK_FALSE(d.under_resolved);  // h = 2/257 < eps/4? 0.0078 < 0.0125: yes
  OperatorDiscretization coarse = discretize(vf, 0.01, 256);
  CHECK(coarse.under_resolved);
  CHECK_THROWS_AS(eigenpairs(d, 256), std::invalid_argument);  // k_max > n/4
}

TEST_CASE("eigenpairs of the example operator") {
  VectorField vf = preset();
  const double eps = 0.05;
  const std::size_t n = suggested_grid(vf, eps, 2.0);
  OperatorDiscretization d = discretize(vf, eps, n);
  Spectrum s = eigenpairs(d, 16);

  // ground level near E0 + eps a/2 (harmonic quantization)
  CHECK(s.lambda[0] == doctest::Approx(0.25 + eps * 2.0 / 2.0).epsilon(2e-2));
  CHECK(s.lambda[0] >= 0.25 - 1e-9);  // operator bounded below by min V
  // simplicity
  for (std::size_t k = 0; k + 1 < s.lambda.size(); ++k) CHECK(s.lambda[k + 1] > s.lambda[k]);
  // orthonormality in L2(h)
  double gram_res = 0.0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = i; j < 16; ++j) {
      double g = 0.0;
      for (std::size_t q = 0; q < s.x.size(); ++q) g += s.phi[i][q] * s.phi[j][q] * s.h;
      gram_res = std::max(gram_res, std::fabs(g - (i == j ? 1.0 : 0.0)));
    }
  CHECK(gram_res < 1e-8);
  // parity about the midpoint: phi_k alternately even/odd
  for (std::size_t k : {0u, 1u, 2u, 3u}) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double res = 0.0;
    for (std::size_t q = 0; q < s.x.size(); ++q) {
      const double mirrored = sign * s.phi[k][s.x.size() - 1 - q];
      res = std::max(res, std::fabs(s.phi[k][q] - mirrored));
    }
    CHECK(res < 1e-6);
  }
  // sign convention
  for (std::size_t k = 0; k < 16; ++k) CHECK(s.dphi0[k] > 0.0);
}

TEST_CASE("mesh convergence is second order") {
  VectorField vf = preset();
  const double eps = 0.05;
  std::vector<double> l1, l2, l4;
  l1 = eigenvalues_bisect(discretize(vf, eps, 800), 11, false);
  l2 = eigenvalues_bisect(discretize(vf, eps, 1600), 11, false);
  l4 = eigenvalues_bisect(discretize(vf, eps, 3200), 11, false);
  for (std::size_t k = 0; k <= 10; ++k) {
    const double r = (l1[k] - l2[k]) / (l2[k] - l4[k]);
    CHECK(r > 3.5);
    CHECK(r < 4.5);
  }
}

TEST_CASE("counting function against the phase volume") {
  VectorField vf = preset();
  Potential pot = potential(vf);
  ClassicalTable tab = build_table(pot);
  const double eps = 0.05;
  OperatorDiscretization d = discretize(vf, eps, suggested_grid(vf, eps, 4.0));
  Spectrum s = eigenpairs(d, 40);
  WeylReport wr = weyl_check(s, pot, tab, eps);
  CHECK(wr.band_violations == 0);
  CHECK(wr.D_fit < 3.0);
  CHECK(wr.k_used == 40);
  // counting residual within D_fit + 2
  for (double E : linspace(0.5, 2.2, 10)) {
    std::size_t count = 0;
    for (double lam : s.lambda)
      if (lam <= E) ++count;
    const double pred = phase_volume(pot, E) / (M_PI * eps);
    CHECK(std::fabs(static_cast<double>(count) - pred) <= wr.D_fit + 2.0);
  }
}

TEST_CASE("gap structure") {
  VectorField vf = preset();
  Potential pot = potential(vf);
  ClassicalTable tab = build_table(pot);
  const double eps = 0.05;
  OperatorDiscretization d = discretize(vf, eps, suggested_grid(vf, eps, 5.0));
  Spectrum s = eigenpairs(d, 40);
  GapReport gr = gap_check(s, pot, tab.T1, eps, 0.5);
  CHECK(gr.gamma_obs > 0.0);
  CHECK(gr.gamma2_obs > 0.0);
  CHECK(gr.N_obs < 40);
  CHECK_FALSE(gr.mid_ratio.empty());
  for (double r : gr.mid_ratio) {
    CHECK(r > 0.8);
    CHECK(r < 1.25);
  }
}

TEST_CASE("ground state localization at moderate viscosity") {
  VectorField vf = preset();
  const double eps = 0.05;
  OperatorDiscretization d = discretize(vf, eps, suggested_grid(vf, eps, 2.0));
  Spectrum s = eigenpairs(d, 4);
  LocalizationReport rep = localization_check(s, vf, eps, {0});
  REQUIRE(rep.entries.size() == 1);
  const LocalizationEntry& e = rep.entries[0];
  CHECK(e.points > 20);
  CHECK(e.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(e.r2 > 0.99);
  CHECK(e.delta_flux < 0.35);
}
