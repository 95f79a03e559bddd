#include "mtkink/kink_analytic.hpp"

#include <cmath>
#include <numbers>

namespace mtkink::kink {

namespace {

constexpr double kSaturation = 700.0;

// Fractions of the gap occupied above a and below b: (psi - a)/(b - a) and
// (b - psi)/(b - a). Computed separately so neither tail loses precision.
struct Split {
  double upper;  // 1/(1 + e^z)
  double lower;  // e^z/(1 + e^z)
};

Split split(const KinkProfile& p, double xi) {
  const double z = p.width_rate * (xi - p.center);
  if (z > kSaturation) return {0.0, 1.0};
  if (z < -kSaturation) return {1.0, 0.0};
  return {1.0 / (1.0 + std::exp(z)), 1.0 / (1.0 + std::exp(-z))};
}

}  // namespace

KinkProfile make_profile(const cubic::CubicRoots& roots, double center) {
  KinkProfile p;
  p.roots = roots;
  p.width_rate = (roots.b - roots.a) / std::numbers::sqrt2;
  p.center = center;
  p.rho_consistent = (roots.a + roots.b - 2.0 * roots.d) / std::numbers::sqrt2;
  return p;
}

double kink_value(const KinkProfile& profile, double xi) {
  const auto& r = profile.roots;
  const Split s = split(profile, xi);
  // anchor on the nearer root so the tails land on a and b exactly
  return s.upper <= 0.5 ? r.a + (r.b - r.a) * s.upper : r.b - (r.b - r.a) * s.lower;
}

double kink_slope(const KinkProfile& profile, double xi) {
  // psi' = -(psi - a)(b - psi)/sqrt 2
  const auto& r = profile.roots;
  const double gap = r.b - r.a;
  const Split s = split(profile, xi);
  return -(gap * s.upper) * (gap * s.lower) / std::numbers::sqrt2;
}

double kink_curvature(const KinkProfile& profile, double xi) {
  // psi'' = -(a + b - 2 psi) psi'/sqrt 2
  const auto& r = profile.roots;
  const double gap = r.b - r.a;
  const Split s = split(profile, xi);
  const double mid = gap * (s.lower - s.upper);  // a + b - 2 psi
  return -mid * kink_slope(profile, xi) / std::numbers::sqrt2;
}

double ode_residual(const KinkProfile& profile, double rho, double sigma, double xi) {
  const double psi = kink_value(profile, xi);
  return kink_curvature(profile, xi) + rho * kink_slope(profile, xi) - psi * psi * psi + psi +
         sigma;
}

double kink_velocity(const units::PhysicalParams& params, double d, VelocityMode mode) {
  const auto derived = units::derive(params);
  const double v0 = derived.v0;
  if (params.gamma == 0.0) return v0;
  if (d == 0.0)
    throw RegimeError("no propagating kink: d = 0 with friction gamma > 0");
  if (mode == VelocityMode::consistent && d * derived.sigma > 0.0)
    throw ValidationError(
        "sign of d inconsistent with sigma: the closed-form front would need negative friction");
  const double stiffness = mode == VelocityMode::paper ? params.M * v0 * v0
                                                       : params.M * derived.abs_A;
  const double g2 = params.gamma * params.gamma;
  return v0 / std::sqrt(1.0 + 2.0 * g2 / (9.0 * d * d * stiffness));
}

KinkEnergetics kink_energetics(const units::PhysicalParams& params, double v) {
  const auto derived = units::derive(params);
  if (!(v >= 0.0)) throw ValidationError("kink_energetics requires v >= 0");
  if (!(v < derived.v0)) throw ValidationError("kink_energetics requires v < v0");
  const double A = params.A;
  const double B = params.B;
  KinkEnergetics e;
  e.v = v;
  e.Delta = 2.0 * std::numbers::sqrt2 / 3.0 * A * A / B +
            std::numbers::sqrt2 / 3.0 * params.k_stiff * A / B;
  e.M_star = 4.0 / (3.0 * std::numbers::sqrt2) * params.M * A * derived.alpha(v) /
             (params.R0 * B);
  e.kinetic = 0.5 * e.M_star * v * v;
  e.total = e.Delta + e.kinetic;
  return e;
}

double continuum_kink_energy(const units::PhysicalParams& params, double v) {
  const auto derived = units::derive(params);
  return kink_energetics(params, v).M_star * derived.v0 * derived.v0;
}

double transfer_time(double L, double v) {
  if (!(L > 0.0)) throw ValidationError("transfer_time requires L > 0");
  if (!(v > 0.0)) throw ValidationError("transfer_time requires v > 0");
  return L / v;
}

}  // namespace mtkink::kink
