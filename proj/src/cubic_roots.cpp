#include "mtkink/cubic_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mtkink/format.hpp"

namespace mtkink::cubic {

namespace {

double newton_polish(double psi, double sigma) {
  const double slope = 3.0 * psi * psi - 1.0;
  if (slope == 0.0) return psi;
  return psi - force_cubic(psi, sigma) / slope;
}

// Trigonometric solution for 0 <= sigma < sigma_c.
CubicRoots solve_nonnegative(double sigma) {
  const double scale = 2.0 / std::sqrt(3.0);
  const double arg = std::clamp(1.5 * std::sqrt(3.0) * sigma, -1.0, 1.0);
  const double phase = std::acos(arg) / 3.0;
  constexpr double third_turn = 2.0 * std::numbers::pi / 3.0;
  CubicRoots r;
  r.sigma = sigma;
  r.b = newton_polish(scale * std::cos(phase), sigma);
  r.d = newton_polish(scale * std::cos(phase - third_turn), sigma);
  r.a = newton_polish(scale * std::cos(phase - 2.0 * third_turn), sigma);
  return r;
}

}  // namespace

KinkRegimeLost::KinkRegimeLost(double sigma, double lone_root)
    : RegimeError("kink regime lost: |sigma| = " + format_double(std::abs(sigma)) +
                  " >= critical " + format_double(critical_sigma()) +
                  "; lone real root " + format_double(lone_root)),
      sigma_(sigma),
      lone_root_(lone_root) {}

double critical_sigma() { return 2.0 / (3.0 * std::sqrt(3.0)); }

double dominant_root(double sigma) {
  const double s = std::abs(sigma);
  const double scale = 2.0 / std::sqrt(3.0);
  double root;
  if (s < critical_sigma()) {
    root = solve_nonnegative(s).b;
  } else {
    const double arg = std::max(1.0, 1.5 * std::sqrt(3.0) * s);
    root = newton_polish(scale * std::cosh(std::acosh(arg) / 3.0), s);
  }
  return sigma < 0 ? -root : root;
}

CubicRoots solve_force_cubic(double sigma) {
  if (!std::isfinite(sigma)) throw ValidationError("sigma is not finite");
  if (std::abs(sigma) >= critical_sigma() - critical_margin)
    throw KinkRegimeLost(sigma, dominant_root(sigma));
  if (sigma >= 0) return solve_nonnegative(sigma);
  // Odd symmetry: roots(-s) = -reverse(roots(s)).
  const CubicRoots pos = solve_nonnegative(-sigma);
  return CubicRoots{-pos.b, -pos.d, -pos.a, sigma};
}

CubicRoots roots_from_params(const units::PhysicalParams& params) {
  return solve_force_cubic(units::derive(params).sigma);
}

}  // namespace mtkink::cubic
