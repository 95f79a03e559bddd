#include "mtkink/chain_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef MTKINK_HAVE_OPENMP
#include <omp.h>
#endif

namespace mtkink::chain::kernels {

namespace {

constexpr std::ptrdiff_t kEnergyBlock = 256;

inline double left_of(std::span<const double> u, std::size_t n, const ForceCoeffs& c) {
  if (n > 0) return u[n - 1];
  return c.boundary == Boundary::periodic ? u[u.size() - 1] : c.left_ghost;
}

inline double right_of(std::span<const double> u, std::size_t n, const ForceCoeffs& c) {
  if (n + 1 < u.size()) return u[n + 1];
  return c.boundary == Boundary::periodic ? u[0] : c.right_ghost;
}

inline double site_force(double left, double self, double right, const ForceCoeffs& c) {
  return c.coupling * (right + left - 2.0 * self) + c.A * self - c.B * self * self * self +
         c.drive;
}

// Weights of the exact friction sub-step. For gamma -> 0 the forcing weight
// tends to h/M.
struct KickWeights {
  double decay;
  double forcing;
};

inline KickWeights kick_weights(double mass, double gamma, double h) {
  const double x = gamma * h / mass;
  if (x == 0.0) return {1.0, h / mass};
  return {std::exp(-x), -std::expm1(-x) / gamma};
}

inline double site_energy(double u, double u_dot, double right, const ForceCoeffs& c,
                          const EnergyCoeffs& e, bool with_bond) {
  const double u2 = u * u;
  double h = 0.5 * e.mass * u_dot * u_dot - 0.5 * c.A * u2 + 0.25 * c.B * u2 * u2 - c.drive * u;
  if (with_bond) {
    const double du = right - u;
    h += 0.5 * c.coupling * du * du;
  }
  return h;
}

// max-reductions drop NaN; x - x is 0 for finite x and NaN otherwise, so a
// summed probe flags any non-finite entry without a branch in the loop.
inline double peak_or_inf(double peak, double probe) {
  return probe == 0.0 ? peak : std::numeric_limits<double>::infinity();
}

// Bond between the left ghost and site 0 (fixed boundary only).
inline double left_ghost_bond(std::span<const double> u, const ForceCoeffs& c) {
  if (c.boundary != Boundary::fixed_at_minima || u.empty()) return 0.0;
  const double du = u[0] - c.left_ghost;
  return 0.5 * c.coupling * du * du;
}

}  // namespace

namespace serial {

void conservative_force(std::span<const double> u, std::span<double> force,
                        const ForceCoeffs& c) {
  for (std::size_t n = 0; n < u.size(); ++n)
    force[n] = site_force(left_of(u, n, c), u[n], right_of(u, n, c), c);
}

void friction_kick(std::span<double> u_dot, std::span<const double> force, double mass,
                   double gamma, double h) {
  const auto w = kick_weights(mass, gamma, h);
  for (std::size_t n = 0; n < u_dot.size(); ++n)
    u_dot[n] = w.decay * u_dot[n] + w.forcing * force[n];
}

double drift(std::span<double> u, std::span<const double> u_dot, double h) {
  double peak = 0.0, probe = 0.0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    u[n] += h * u_dot[n];
    peak = std::max(peak, std::abs(u[n]));
    probe += u[n] - u[n];
  }
  return peak_or_inf(peak, probe);
}

double total_energy(std::span<const double> u, std::span<const double> u_dot,
                    const ForceCoeffs& c, const EnergyCoeffs& e) {
  double sum = left_ghost_bond(u, c);
  for (std::size_t n = 0; n < u.size(); ++n)
    sum += site_energy(u[n], u_dot[n], right_of(u, n, c), c, e, true);
  return e.site_weight * sum;
}

}  // namespace serial

namespace omp {

void conservative_force(std::span<const double> u, std::span<double> force,
                        const ForceCoeffs& c) {
  const auto size = static_cast<std::ptrdiff_t>(u.size());
  if (size == 0) return;
  // Edges handled outside the parallel loop so the interior is branch-free.
  force[0] = site_force(left_of(u, 0, c), u[0], right_of(u, 0, c), c);
  if (size > 1) {
    const auto last = static_cast<std::size_t>(size - 1);
    force[last] = site_force(left_of(u, last, c), u[last], right_of(u, last, c), c);
  }
  const double* pu = u.data();
  double* pf = force.data();
  // Locals, so stores through pf cannot alias the coefficients.
  const double K = c.coupling, A = c.A, B = c.B, f = c.drive;
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t n = 1; n < size - 1; ++n) {
    const double x = pu[n];
    pf[n] = K * (pu[n + 1] + pu[n - 1] - 2.0 * x) + A * x - B * x * x * x + f;
  }
}

void friction_kick(std::span<double> u_dot, std::span<const double> force, double mass,
                   double gamma, double h) {
  const auto w = kick_weights(mass, gamma, h);
  const double decay = w.decay, forcing = w.forcing;
  const auto size = static_cast<std::ptrdiff_t>(u_dot.size());
  double* pv = u_dot.data();
  const double* pf = force.data();
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t n = 0; n < size; ++n) pv[n] = decay * pv[n] + forcing * pf[n];
}

double drift(std::span<double> u, std::span<const double> u_dot, double h) {
  const auto size = static_cast<std::ptrdiff_t>(u.size());
  double* pu = u.data();
  const double* pv = u_dot.data();
  double peak = 0.0, probe = 0.0;
#pragma omp parallel for simd schedule(static) reduction(max : peak) reduction(+ : probe)
  for (std::ptrdiff_t n = 0; n < size; ++n) {
    const double x = pu[n] + h * pv[n];
    pu[n] = x;
    peak = std::max(peak, std::abs(x));
    probe += x - x;
  }
  return peak_or_inf(peak, probe);
}

double total_energy(std::span<const double> u, std::span<const double> u_dot,
                    const ForceCoeffs& c, const EnergyCoeffs& e) {
  const auto size = static_cast<std::ptrdiff_t>(u.size());
  if (size == 0) return 0.0;
  const double* pu = u.data();
  const double* pv = u_dot.data();
  // Fixed blocks summed in index order: the result does not depend on the
  // thread count or on the order in which threads finish.
  const std::ptrdiff_t bonds = size - 1;
  const std::ptrdiff_t blocks = (bonds + kEnergyBlock - 1) / kEnergyBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::ptrdiff_t end = std::min(bonds, (b + 1) * kEnergyBlock);
    double s = 0.0;
    for (std::ptrdiff_t n = b * kEnergyBlock; n < end; ++n)
      s += site_energy(pu[n], pv[n], pu[n + 1], c, e, true);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double sum = 0.0;
  for (double s : partial) sum += s;
  const auto last = static_cast<std::size_t>(size - 1);
  sum += site_energy(u[last], u_dot[last], right_of(u, last, c), c, e, true);
  sum += left_ghost_bond(u, c);
  return e.site_weight * sum;
}

}  // namespace omp

int max_threads() {
#ifdef MTKINK_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mtkink::chain::kernels
