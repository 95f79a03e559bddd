#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "mtkink/chain_kernels.hpp"
#include "mtkink/cubic_roots.hpp"
#include "mtkink/units_params.hpp"

namespace mtkink::chain {

using kernels::Boundary;

/// Discretized dimer displacements on a uniform grid x_n = n dx.
///
/// The grid spacing need not equal the dimer spacing R0: the coupling is
/// rescaled to K = M v0^2 / dx^2 (which is k_stiff when dx = R0) and each
/// site carries dx/R0 dimers in the energy sum. For a fixed boundary the
/// ghost values beyond either end are held at `left_ghost` / `right_ghost`.
struct ChainState {
  std::vector<double> u;      ///< m
  std::vector<double> u_dot;  ///< m/s
  double t = 0.0;             ///< s
  units::PhysicalParams params;
  Boundary boundary = Boundary::fixed_at_minima;
  double dx = 0.0;  ///< m
  double left_ghost = 0.0;
  double right_ghost = 0.0;

  std::size_t size() const { return u.size(); }
};

inline constexpr std::size_t min_grid = 8;

/// Throws ValidationError if sizes, spacing or finiteness are off.
void validate(const ChainState& state);

/// Uniform state u_n = value, u_dot = 0, ghosts at `value`.
ChainState uniform_state(const units::PhysicalParams& params, std::size_t n_grid, double dx,
                         double value, Boundary boundary = Boundary::fixed_at_minima);

kernels::ForceCoeffs force_coeffs(const ChainState& state);
kernels::EnergyCoeffs energy_coeffs(const ChainState& state);

/// Full acceleration of site n including friction, m/s^2.
double equation_of_motion(const ChainState& state, std::size_t n);

/// Largest linear frequency of the lattice about the stable vacua, rad/s.
double max_frequency(const ChainState& state);

/// Largest admissible time step, 0.5 / omega_max.
double stable_dt(const ChainState& state);

/// Default step used when the caller asks for an automatic one.
double auto_dt(const ChainState& state);

/// Splitting step: half exact-friction kick, drift, force update, half kick.
/// Aborts with NumericalError when |u| exceeds 1e3 sqrt(A/B).
class Stepper {
 public:
  explicit Stepper(const ChainState& state, bool use_parallel = true);
  void step(ChainState& state, double dt);
  /// Keeps the cached force valid after the caller rewrites state.t.
  void resync(const ChainState& state) { cached_t_ = state.t; }

 private:
  std::vector<double> force_;
  bool parallel_;
  bool primed_ = false;
  double bound_ = 0.0;
  double cached_t_ = 0.0;
  const double* cached_data_ = nullptr;
};

/// Convenience single step (allocates a fresh stepper).
ChainState step(ChainState state, double dt);

/// Steady velocity used to seed a co-moving front: the exact-solution
/// velocity when gamma > 0 and sigma != 0, else 0 (a stationary front).
double seeding_velocity(const units::PhysicalParams& params, const cubic::CubicRoots& roots);

/// Width of the front in metres, 1/(alpha mu).
double kink_width(const units::PhysicalParams& params);

/// Samples the closed-form front in the lab frame at t = 0 around `center`,
/// co-moving at seeding_velocity(). The front runs from the b vacuum (left)
/// to the a vacuum (right). Requires dx < 0.2 kink_width().
ChainState init_kink(const units::PhysicalParams& params, std::size_t n_grid, double dx,
                     double center, Boundary boundary = Boundary::fixed_at_minima);

/// Periodic grid with a front at `kink_center` and its mirror image at
/// `antikink_center`; the a domain lies between them.
ChainState init_kink_antikink(const units::PhysicalParams& params, std::size_t n_grid,
                              double dx, double kink_center, double antikink_center);

/// Position (m) of the first crossing of u through level * sqrt(A/B),
/// linearly interpolated between sites.
double front_position(const ChainState& state, double level);

/// Every crossing of u through level * sqrt(A/B) (periodic wrap included).
std::vector<double> front_crossings(const ChainState& state, double level);

double total_energy(const ChainState& state);

struct Trajectory {
  std::vector<double> times;     ///< s
  std::vector<double> fronts;    ///< m, NaN when no crossing was found
  std::vector<double> energies;  ///< J
  ChainState final_state;
};

struct SpeedFit {
  double speed = 0.0;           ///< m/s
  double standard_error = 0.0;  ///< residual standard error of the slope, m/s
  std::size_t samples_used = 0;
};

inline constexpr double transient_fraction = 0.2;

/// Least-squares slope of front position against time over the samples that
/// follow the discarded transient.
SpeedFit measure_speed(const Trajectory& trajectory);

enum class InitialKind { kink, kink_antikink, vacuum };

struct InitialCondition {
  InitialKind kind = InitialKind::kink;
  std::size_t n_grid = 2048;
  double dx = 0.0;       ///< 0 selects default_dx(params)
  double center = -1.0;  ///< m; negative selects a quarter of the box
  double antikink_center = -1.0;
  Boundary boundary = Boundary::fixed_at_minima;
};

/// R0 when that resolves the front with at least 20 sites, else width/20.
double default_dx(const units::PhysicalParams& params);

ChainState make_initial_state(const units::PhysicalParams& params, const InitialCondition& ic);

struct RunOptions {
  double dt = 0.0;                ///< 0 selects auto_dt
  std::size_t sample_every = 1;  ///< steps between samples
  double front_level = std::numeric_limits<double>::quiet_NaN();  ///< NaN: (a + b)/2
  bool use_parallel = true;
};

/// Called with every sampled state, from the running task only.
using TrajectorySink = std::function<void(const ChainState&)>;

Trajectory run(const units::PhysicalParams& params, const InitialCondition& ic, double t_end,
               const RunOptions& options = {}, const TrajectorySink& sink = {});

/// Same as run() but starting from an explicit state.
Trajectory run_from(ChainState state, double t_end, const RunOptions& options = {},
                    const TrajectorySink& sink = {});

}  // namespace mtkink::chain
