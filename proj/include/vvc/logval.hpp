#pragma once

#include <cmath>
#include <limits>

namespace vvc {

// Signed value stored as sign * exp(lg).  All moment/Gramian arithmetic runs on
// these pairs so factors like exp(beta^2 T) up to e^700 and beyond never overflow.
struct LogVal {
  double lg = -std::numeric_limits<double>::infinity();
  int sgn = 0;  // -1, 0, +1

  LogVal() = default;
  LogVal(double lg_, int sgn_) : lg(lg_), sgn(sgn_) {
    if (sgn == 0 || lg == -std::numeric_limits<double>::infinity()) {
      lg = -std::numeric_limits<double>::infinity();
      sgn = 0;
    }
  }

  static LogVal zero() { return LogVal(); }
  static LogVal one() { return LogVal(0.0, 1); }

  static LogVal from(double v) {
    if (v == 0.0) return zero();
    return LogVal(std::log(std::fabs(v)), v > 0 ? 1 : -1);
  }
  static LogVal exp_of(double lg) { return LogVal(lg, 1); }

  bool is_zero() const { return sgn == 0; }
  double value() const { return sgn == 0 ? 0.0 : sgn * std::exp(lg); }
  double log_abs() const { return lg; }

  LogVal operator-() const { return LogVal(lg, -sgn); }

  friend LogVal operator*(const LogVal& a, const LogVal& b) {
    if (a.sgn == 0 || b.sgn == 0) return zero();
    return LogVal(a.lg + b.lg, a.sgn * b.sgn);
  }
  friend LogVal operator/(const LogVal& a, const LogVal& b) {
    if (b.sgn == 0) return LogVal(std::numeric_limits<double>::infinity(), a.sgn == 0 ? 1 : a.sgn);
    if (a.sgn == 0) return zero();
    return LogVal(a.lg - b.lg, a.sgn * b.sgn);
  }
  friend LogVal operator+(const LogVal& a, const LogVal& b) {
    if (a.sgn == 0) return b;
    if (b.sgn == 0) return a;
    const LogVal& big = (a.lg >= b.lg) ? a : b;
    const LogVal& sml = (a.lg >= b.lg) ? b : a;
    const double m = big.sgn + sml.sgn * std::exp(sml.lg - big.lg);
    if (m == 0.0) return zero();
    return LogVal(big.lg + std::log(std::fabs(m)), m > 0 ? 1 : -1);
  }
  friend LogVal operator-(const LogVal& a, const LogVal& b) { return a + (-b); }

  LogVal& operator+=(const LogVal& o) { *this = *this + o; return *this; }
  LogVal& operator*=(const LogVal& o) { *this = *this * o; return *this; }

  // |a| < |b|
  static bool abs_less(const LogVal& a, const LogVal& b) {
    if (a.sgn == 0) return b.sgn != 0;
    if (b.sgn == 0) return false;
    return a.lg < b.lg;
  }
};

inline LogVal pow(const LogVal& a, double p) {
  if (a.sgn == 0) return LogVal::zero();
  return LogVal(a.lg * p, 1);  // caller guarantees a > 0 for fractional p
}

inline LogVal sqrt(const LogVal& a) { return pow(a, 0.5); }

}  // namespace vvc
