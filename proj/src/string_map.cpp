#include "mtkink/string_map.hpp"

#include <cmath>
#include <numbers>

#include "mtkink/error.hpp"

namespace mtkink::strings {

StringFrame frame_from_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be > 0");
  StringFrame f;
  f.rho = rho;
  f.gamma_vs_squared = rho * rho / 4.0;
  f.v_s_squared = 1.0 - 4.0 / (rho * rho);
  f.c_t = 1.0 - 24.0 * f.v_s_squared * f.gamma_vs_squared;
  f.c_x = 1.0 + 24.0 * f.gamma_vs_squared;
  if (f.v_s_squared < 0.0) {
    const double mag = -f.v_s_squared;
    f.c_s = 1.0 + 24.0 * mag / (1.0 + mag);
  }
  f.dilaton_slope = -rho;
  return f;
}

RealityReport reality_condition(const units::PhysicalParams& params, double d) {
  if (d == 0.0) throw ValidationError("reality condition needs d != 0");
  const auto derived = units::derive(params);
  const double v0 = derived.v0;
  RealityReport r;
  r.d = d;
  r.printed = 8.0 * params.M * derived.abs_A < 9.0 * d * d * params.M * v0 * v0;
  // v = v0/sqrt(1 + X); v0^2 - v^2 = v0^2 X/(1 + X) keeps rho accurate when
  // v rounds to v0. gamma = 0 gives rho = 0 identically.
  const double g2 = params.gamma * params.gamma;
  const double X = 2.0 * g2 / (9.0 * d * d * params.M * v0 * v0);
  if (X > 0.0) {
    const double v = v0 / std::sqrt(1.0 + X);
    r.rho_paper = params.gamma * v / std::sqrt(params.M * derived.abs_A * v0 * v0 * X / (1.0 + X));
  }
  r.derived = r.rho_paper >= 2.0;
  r.rho_consistent = -3.0 * d / std::numbers::sqrt2;
  r.derived_consistent = r.rho_consistent >= 2.0;
  r.agree = r.printed == r.derived;
  return r;
}

BoostedPoint boost_coords(double x, double t, double v_s) {
  if (!(std::abs(v_s) < 1.0)) throw ValidationError("boost requires |v_s| < 1");
  const double g = 1.0 / std::sqrt(1.0 - v_s * v_s);
  return {g * (x - v_s * t), g * (t - v_s * x)};
}

double adm_mass(double k_level, double a_dilaton, double c_prop) {
  if (!(k_level > 2.0)) throw ValidationError("adm_mass requires k > 2");
  return c_prop * std::exp(a_dilaton) / std::sqrt(k_level - 2.0);
}

}  // namespace mtkink::strings
