#pragma once

#include <cmath>
#include <optional>

#include "mtkink/units_params.hpp"

namespace mtkink::strings {

/// Non-critical string quantities attached to a friction value rho.
/// Imaginary v_s is carried as a negative v_s_squared.
struct StringFrame {
  double rho = 0.0;
  double v_s_squared = 0.0;
  double gamma_vs_squared = 0.0;
  double c_t = 0.0;                 ///< time-like factor
  double c_x = 0.0;                 ///< space-like factor
  std::optional<double> c_s;        ///< matter charge, set when v_s_squared < 0
  double dilaton_slope = 0.0;       ///< Phi = dilaton_slope * xi
};

/// rho = 2 gamma_{v_s}  =>  gamma_vs^2 = rho^2/4, v_s^2 = 1 - 4/rho^2.
StringFrame frame_from_rho(double rho);

/// Inverse of frame_from_rho.
inline double rho_from_frame(const StringFrame& f) { return 2.0 * std::sqrt(f.gamma_vs_squared); }

struct RealityReport {
  double d = 0.0;
  bool printed = false;             ///< 8 M|A| < 9 d^2 M v0^2
  double rho_paper = 0.0;           ///< rho at the paper-mode velocity
  bool derived = false;             ///< rho_paper >= 2
  double rho_consistent = 0.0;      ///< -3d/sqrt 2
  bool derived_consistent = false;  ///< rho_consistent >= 2
  bool agree = false;               ///< printed == derived
};

/// Evaluates the reality condition for v_s both from the closed-form inequality and through rho.
RealityReport reality_condition(const units::PhysicalParams& params, double d);

struct BoostedPoint {
  double x_prime = 0.0;
  double t_prime = 0.0;
};

BoostedPoint boost_coords(double x, double t, double v_s);

/// c_prop e^a / sqrt(k - 2); requires k > 2.
double adm_mass(double k_level, double a_dilaton, double c_prop = 1.0);

}  // namespace mtkink::strings
