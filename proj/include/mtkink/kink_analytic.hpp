#pragma once

#include "mtkink/cubic_roots.hpp"
#include "mtkink/units_params.hpp"

namespace mtkink::kink {

/// Logistic front psi(xi) = a + (b - a) / (1 + exp(mu (xi - xi0))) with
/// mu = (b - a)/sqrt 2. It runs from b at xi -> -inf down to a at xi -> +inf.
struct KinkProfile {
  cubic::CubicRoots roots;
  double width_rate = 0.0;      ///< mu
  double center = 0.0;          ///< xi0
  double rho_consistent = 0.0;  ///< friction for which the profile is exact
};

KinkProfile make_profile(const cubic::CubicRoots& roots, double center = 0.0);

double kink_value(const KinkProfile& profile, double xi);
/// d psi / d xi, closed form.
double kink_slope(const KinkProfile& profile, double xi);
/// d^2 psi / d xi^2, closed form.
double kink_curvature(const KinkProfile& profile, double xi);

/// psi'' + rho psi' - psi^3 + psi + sigma evaluated on the closed-form profile.
double ode_residual(const KinkProfile& profile, double rho, double sigma, double xi);

enum class VelocityMode {
  paper,       ///< v0 [1 + 2 gamma^2/(9 d^2 M v0^2)]^{-1/2}
  consistent,  ///< v0 [1 + 2 gamma^2/(9 d^2 M |A|)]^{-1/2}, solves rho(v) = -3d/sqrt 2
};

double kink_velocity(const units::PhysicalParams& params, double d,
                     VelocityMode mode = VelocityMode::consistent);

struct KinkEnergetics {
  double Delta = 0.0;    ///< binding plus resonant-transfer energy, J
  double kinetic = 0.0;  ///< M* v^2 / 2, J
  double total = 0.0;    ///< J
  double M_star = 0.0;   ///< kg
  double v = 0.0;        ///< m/s
};

KinkEnergetics kink_energetics(const units::PhysicalParams& params, double v);

/// Energy of the continuum front obtained by integrating the Hamiltonian
/// density over the moving profile: M*(v) v0^2. Used to check the lattice.
double continuum_kink_energy(const units::PhysicalParams& params, double v);

/// Time for the front to cross a length L at speed v.
double transfer_time(double L, double v);

}  // namespace mtkink::kink
