#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's solvers.

#include <cmath>
#include <functional>

namespace oracle {

/// Plain bisection on [lo, hi]; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 128) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Triple {
  double a, d, b;
};

/// Roots of psi^3 - psi - s for |s| < 2/(3 sqrt 3), bracketed by the
/// turning points +-1/sqrt 3 of the cubic.
inline Triple cubic_roots(double s) {
  auto f = [s](double x) { return x * x * x - x - s; };
  const double tp = 1.0 / std::sqrt(3.0);
  return {bisect(f, -2.0, -tp), bisect(f, -tp, tp), bisect(f, tp, 2.0)};
}

/// Central difference of f at x with step h.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_diff(double x, double y) {
  return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
}

}  // namespace oracle
