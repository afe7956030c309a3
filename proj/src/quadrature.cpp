#include "vvc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vvc {

namespace {

// Kronrod-15 nodes/weights and the embedded Gauss-7 weights.
const double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const Fn1& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  return {resk * h, std::fabs((resk - resg) * h)};
}

}  // namespace

double integrate(const Fn1& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  struct Item {
    double a, b;
    int depth;
  };
  const double width = std::fabs(b - a);
  std::vector<Item> stack{{a, b, 0}};
  double total = 0.0;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    PanelResult r = gk15(f, it.a, it.b);
    // budget proportional to panel width, with a machine-precision floor
    const double tol = std::max(abs_tol * std::fabs(it.b - it.a) / width,
                                64.0 * 1e-17 * std::fabs(r.integral));
    const double m = 0.5 * (it.a + it.b);
    if (r.error <= tol || it.depth >= max_depth || m <= it.a || m >= it.b) {
      total += r.integral;
      continue;
    }
    stack.push_back({it.a, m, it.depth + 1});
    stack.push_back({m, it.b, it.depth + 1});
  }
  return total;
}

double integrate_endpoint_singular(const Fn1& f, double a, double b, bool sing_at_b,
                                   double abs_tol) {
  if (a == b) return 0.0;
  // Geometric panels toward the singular endpoint; each panel is regular.
  const int kLevels = 56;
  double total = 0.0;
  double w = b - a;
  double outer = 1.0;  // fraction of the interval still to cover
  for (int k = 0; k < kLevels; ++k) {
    const double inner = (k + 1 < kLevels) ? outer * 0.5 : 0.0;
    double lo, hi;
    if (sing_at_b) {
      lo = b - w * outer;
      hi = b - w * inner;
    } else {
      lo = a + w * inner;
      hi = a + w * outer;
    }
    total += integrate(f, lo, hi, abs_tol / kLevels, 30);
    outer = inner;
    if (outer == 0.0) break;
  }
  return total;
}

double integrate_to_infinity(const Fn1& f, double a, double width_scale, double abs_tol) {
  // x = a + w (1-t)/t, dx = -w/t^2 dt; t from 1 down to 0 maps to x in [a, inf).
  const double w = width_scale;
  Fn1 g = [&](double t) {
    const double x = a + w * (1.0 - t) / t;
    return f(x) * w / (t * t);
  };
  return integrate_endpoint_singular(g, 0.0, 1.0, /*sing_at_b=*/false, abs_tol);
}

const QuadNodes& gauss_legendre(std::size_t n) {
  static std::map<std::size_t, QuadNodes> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadNodes q;
  q.x.resize(n);
  q.w.resize(n);
  // Newton iteration on Legendre polynomials, Chebyshev initial guess.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    q.x[i] = -x;
    q.x[n - 1 - i] = x;
    const double wgt = 2.0 / ((1.0 - x * x) * pp * pp);
    q.w[i] = wgt;
    q.w[n - 1 - i] = wgt;
  }
  auto [pos, inserted] = cache.emplace(n, std::move(q));
  (void)inserted;
  return pos->second;
}

MappedQuad composite_gl(double a, double b, std::size_t panels, std::size_t per_panel) {
  if (panels == 0) throw std::invalid_argument("composite_gl: panels must be positive");
  const QuadNodes& base = gauss_legendre(per_panel);
  MappedQuad q;
  q.x.reserve(panels * per_panel);
  q.w.reserve(panels * per_panel);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double c = lo + 0.5 * h;
    for (std::size_t j = 0; j < per_panel; ++j) {
      q.x.push_back(c + 0.5 * h * base.x[j]);
      q.w.push_back(0.5 * h * base.w[j]);
    }
  }
  return q;
}

}  // namespace vvc
