#pragma once

#include <cstddef>
#include <span>

namespace mtkink::chain::kernels {

enum class Boundary { fixed_at_minima, periodic };

/// Per-site force coefficients of the lattice equation
///   M u_tt = K (u_{n+1} + u_{n-1} - 2 u_n) + A u - B u^3 + f - gamma u_t
/// with K = M v0^2 / dx^2 and f = q E.
struct ForceCoeffs {
  double coupling = 0.0;  ///< K
  double A = 0.0;
  double B = 0.0;
  double drive = 0.0;     ///< q E
  Boundary boundary = Boundary::fixed_at_minima;
  double left_ghost = 0.0;   ///< value clamped beyond site 0 (fixed boundary)
  double right_ghost = 0.0;  ///< value clamped beyond site N-1
};

/// Energy weights: each site stands for `site_weight` dimers.
struct EnergyCoeffs {
  double mass = 0.0;
  double site_weight = 1.0;
};

// Serial reference kernels. The OpenMP kernels below must agree with these
// to rounding.
namespace serial {
void conservative_force(std::span<const double> u, std::span<double> force,
                        const ForceCoeffs& c);
/// v <- v e^{-c h} + (F/gamma)(1 - e^{-c h}) with c = gamma/M (F h/M when gamma = 0).
void friction_kick(std::span<double> u_dot, std::span<const double> force, double mass,
                   double gamma, double h);
/// u <- u + h v; returns max |u| after the update.
double drift(std::span<double> u, std::span<const double> u_dot, double h);
double total_energy(std::span<const double> u, std::span<const double> u_dot,
                    const ForceCoeffs& c, const EnergyCoeffs& e);
}  // namespace serial

namespace omp {
void conservative_force(std::span<const double> u, std::span<double> force,
                        const ForceCoeffs& c);
void friction_kick(std::span<double> u_dot, std::span<const double> force, double mass,
                   double gamma, double h);
double drift(std::span<double> u, std::span<const double> u_dot, double h);
double total_energy(std::span<const double> u, std::span<const double> u_dot,
                    const ForceCoeffs& c, const EnergyCoeffs& e);
}  // namespace omp

/// Number of OpenMP threads the omp kernels will use (1 without OpenMP).
int max_threads();

}  // namespace mtkink::chain::kernels
