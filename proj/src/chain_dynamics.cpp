#include "mtkink/chain_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mtkink/error.hpp"
#include "mtkink/format.hpp"
#include "mtkink/kink_analytic.hpp"

namespace mtkink::chain {

namespace {

constexpr double kInstabilityFactor = 1e3;
constexpr double kAutoDtFraction = 0.15;
constexpr double kMinSitesPerWidth = 20.0;

double coupling_for(const units::PhysicalParams& p, double dx) {
  const double v0 = units::derive(p).v0;
  return p.M * v0 * v0 / (dx * dx);
}

struct FrontSeed {
  kink::KinkProfile profile;
  double u_scale;
  double alpha;
  double v;
};

FrontSeed seed_front(const units::PhysicalParams& params, std::size_t n_grid, double dx) {
  if (n_grid < min_grid) throw ValidationError("grid must have at least 8 sites");
  if (!(dx > 0.0)) throw ValidationError("dx must be > 0");
  const auto roots = cubic::roots_from_params(params);
  FrontSeed seed;
  seed.profile = kink::make_profile(roots);
  seed.u_scale = units::displacement_scale(params);
  seed.v = seeding_velocity(params, roots);
  seed.alpha = units::derive(params).alpha(seed.v);
  const double width = 1.0 / (seed.alpha * seed.profile.width_rate);
  if (!(dx < 0.2 * width))
    throw ValidationError("grid too coarse: dx = " + format_double(dx) +
                          " m must be below 0.2 x kink width " + format_double(width) + " m");
  return seed;
}

}  // namespace

void validate(const ChainState& state) {
  units::validate(state.params);
  if (state.u.size() < min_grid) throw ValidationError("chain state needs at least 8 sites");
  if (state.u.size() != state.u_dot.size())
    throw ValidationError("u and u_dot must have equal length");
  if (!(state.dx > 0.0)) throw ValidationError("dx must be > 0");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(state.u.begin(), state.u.end(), finite) ||
      !std::all_of(state.u_dot.begin(), state.u_dot.end(), finite))
    throw ValidationError("chain state has non-finite entries");
}

ChainState uniform_state(const units::PhysicalParams& params, std::size_t n_grid, double dx,
                         double value, Boundary boundary) {
  ChainState s;
  s.u.assign(n_grid, value);
  s.u_dot.assign(n_grid, 0.0);
  s.params = params;
  s.boundary = boundary;
  s.dx = dx;
  s.left_ghost = value;
  s.right_ghost = value;
  validate(s);
  return s;
}

kernels::ForceCoeffs force_coeffs(const ChainState& state) {
  kernels::ForceCoeffs c;
  c.coupling = coupling_for(state.params, state.dx);
  c.A = state.params.A;
  c.B = state.params.B;
  c.drive = state.params.q * state.params.E_field;
  c.boundary = state.boundary;
  c.left_ghost = state.left_ghost;
  c.right_ghost = state.right_ghost;
  return c;
}

kernels::EnergyCoeffs energy_coeffs(const ChainState& state) {
  return {state.params.M, state.dx / state.params.R0};
}

double equation_of_motion(const ChainState& state, std::size_t n) {
  if (n >= state.size()) throw ValidationError("site index out of range");
  const auto c = force_coeffs(state);
  const std::size_t last = state.size() - 1;
  const bool periodic = state.boundary == Boundary::periodic;
  const double left = n > 0 ? state.u[n - 1] : (periodic ? state.u[last] : state.left_ghost);
  const double right = n < last ? state.u[n + 1] : (periodic ? state.u[0] : state.right_ghost);
  const double un = state.u[n];
  const double force =
      c.coupling * (right + left - 2.0 * un) + c.A * un - c.B * un * un * un + c.drive;
  return (force - state.params.gamma * state.u_dot[n]) / state.params.M;
}

double max_frequency(const ChainState& state) {
  const auto& p = state.params;
  const double outer = cubic::dominant_root(units::derive(p).sigma);
  const double curvature = p.A * std::max(2.0, 3.0 * outer * outer - 1.0);
  return std::sqrt((4.0 * coupling_for(p, state.dx) + curvature) / p.M);
}

double stable_dt(const ChainState& state) { return 0.5 / max_frequency(state); }

double auto_dt(const ChainState& state) { return kAutoDtFraction / max_frequency(state); }

Stepper::Stepper(const ChainState& state, bool use_parallel)
    : force_(state.size()),
      parallel_(use_parallel),
      bound_(kInstabilityFactor * units::displacement_scale(state.params)) {}

void Stepper::step(ChainState& state, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (force_.size() != state.size()) {
    force_.assign(state.size(), 0.0);
    primed_ = false;
  }
  const auto c = force_coeffs(state);
  const double M = state.params.M;
  const double gamma = state.params.gamma;
  const double half = 0.5 * dt;
  auto force = [&] {
    if (parallel_)
      kernels::omp::conservative_force(state.u, force_, c);
    else
      kernels::serial::conservative_force(state.u, force_, c);
  };
  auto kick = [&] {
    if (parallel_)
      kernels::omp::friction_kick(state.u_dot, force_, M, gamma, half);
    else
      kernels::serial::friction_kick(state.u_dot, force_, M, gamma, half);
  };
  // The cached force is only valid for the state left by the previous step.
  if (!primed_ || cached_t_ != state.t || cached_data_ != state.u.data()) force();
  kick();
  const double peak = parallel_ ? kernels::omp::drift(state.u, state.u_dot, dt)
                                : kernels::serial::drift(state.u, state.u_dot, dt);
  if (!(peak <= bound_))
    throw NumericalError("instability: max |u| = " + format_double(peak) + " m exceeds " +
                         format_double(bound_) + " m at t = " + format_double(state.t) +
                         " s (dt = " + format_double(dt) + " s, stable bound " +
                         format_double(stable_dt(state)) + " s)");
  force();
  kick();
  state.t += dt;
  primed_ = true;
  cached_t_ = state.t;
  cached_data_ = state.u.data();
}

ChainState step(ChainState state, double dt) {
  Stepper stepper(state);
  stepper.step(state, dt);
  return state;
}

double seeding_velocity(const units::PhysicalParams& params, const cubic::CubicRoots& roots) {
  if (params.gamma == 0.0 || roots.sigma == 0.0 || roots.d == 0.0) return 0.0;
  return kink::kink_velocity(params, roots.d, kink::VelocityMode::consistent);
}

double kink_width(const units::PhysicalParams& params) {
  const auto roots = cubic::roots_from_params(params);
  const double v = seeding_velocity(params, roots);
  const double alpha = units::derive(params).alpha(v);
  return std::numbers::sqrt2 / (alpha * (roots.b - roots.a));
}

ChainState init_kink(const units::PhysicalParams& params, std::size_t n_grid, double dx,
                     double center, Boundary boundary) {
  const FrontSeed seed = seed_front(params, n_grid, dx);
  ChainState s;
  s.params = params;
  s.boundary = boundary;
  s.dx = dx;
  s.u.resize(n_grid);
  s.u_dot.resize(n_grid);
  for (std::size_t n = 0; n < n_grid; ++n) {
    const double xi = seed.alpha * (static_cast<double>(n) * dx - center);
    s.u[n] = seed.u_scale * kink::kink_value(seed.profile, xi);
    s.u_dot[n] = -seed.v * seed.u_scale * seed.alpha * kink::kink_slope(seed.profile, xi);
  }
  s.left_ghost = seed.u_scale * seed.profile.roots.b;
  s.right_ghost = seed.u_scale * seed.profile.roots.a;
  validate(s);
  return s;
}

ChainState init_kink_antikink(const units::PhysicalParams& params, std::size_t n_grid,
                              double dx, double kink_center, double antikink_center) {
  const FrontSeed seed = seed_front(params, n_grid, dx);
  if (!(kink_center < antikink_center))
    throw ValidationError("kink centre must lie left of the antikink centre");
  const double a = seed.profile.roots.a;
  ChainState s;
  s.params = params;
  s.boundary = Boundary::periodic;
  s.dx = dx;
  s.u.resize(n_grid);
  s.u_dot.resize(n_grid);
  for (std::size_t n = 0; n < n_grid; ++n) {
    const double x = static_cast<double>(n) * dx;
    const double xi_k = seed.alpha * (x - kink_center);
    const double xi_a = -seed.alpha * (x - antikink_center);
    const double psi =
        kink::kink_value(seed.profile, xi_k) + kink::kink_value(seed.profile, xi_a) - a;
    s.u[n] = seed.u_scale * psi;
    s.u_dot[n] = -seed.v * seed.u_scale * seed.alpha *
                 (kink::kink_slope(seed.profile, xi_k) + kink::kink_slope(seed.profile, xi_a));
  }
  s.left_ghost = s.right_ghost = seed.u_scale * seed.profile.roots.b;
  validate(s);
  return s;
}

std::vector<double> front_crossings(const ChainState& state, double level) {
  if (!std::isfinite(level)) throw ValidationError("front level must be finite");
  const double target = level * units::displacement_scale(state.params);
  std::vector<double> out;
  const std::size_t n_sites = state.size();
  const std::size_t pairs = state.boundary == Boundary::periodic ? n_sites : n_sites - 1;
  for (std::size_t n = 0; n < pairs; ++n) {
    const double lo = state.u[n] - target;
    const double hi = state.u[(n + 1) % n_sites] - target;
    if (lo == 0.0) {
      out.push_back(static_cast<double>(n) * state.dx);
    } else if (lo * hi < 0.0) {
      const double frac = lo / (lo - hi);
      out.push_back((static_cast<double>(n) + frac) * state.dx);
    }
  }
  return out;
}

double front_position(const ChainState& state, double level) {
  if (!std::isfinite(level)) throw ValidationError("front level must be finite");
  const double target = level * units::displacement_scale(state.params);
  for (std::size_t n = 0; n + 1 < state.size(); ++n) {
    const double lo = state.u[n] - target;
    const double hi = state.u[n + 1] - target;
    if (lo == 0.0) return static_cast<double>(n) * state.dx;
    if (lo * hi < 0.0) return (static_cast<double>(n) + lo / (lo - hi)) * state.dx;
  }
  throw NumericalError("no front crossing found at level " + format_double(level));
}

double total_energy(const ChainState& state) {
  return kernels::omp::total_energy(state.u, state.u_dot, force_coeffs(state),
                                    energy_coeffs(state));
}

SpeedFit measure_speed(const Trajectory& trajectory) {
  const std::size_t total = trajectory.times.size();
  if (trajectory.fronts.size() != total)
    throw ValidationError("trajectory times and fronts differ in length");
  const auto skip = static_cast<std::size_t>(std::ceil(transient_fraction * total));
  if (total < skip + 10)
    throw ValidationError("need at least 10 front samples after the discarded transient");
  const std::size_t m = total - skip;
  double t_mean = 0.0, x_mean = 0.0;
  for (std::size_t i = skip; i < total; ++i) {
    if (!std::isfinite(trajectory.fronts[i]))
      throw NumericalError("front lost during run at t = " + format_double(trajectory.times[i]));
    t_mean += trajectory.times[i];
    x_mean += trajectory.fronts[i];
  }
  t_mean /= static_cast<double>(m);
  x_mean /= static_cast<double>(m);
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = skip; i < total; ++i) {
    const double dt = trajectory.times[i] - t_mean;
    stt += dt * dt;
    stx += dt * (trajectory.fronts[i] - x_mean);
  }
  if (!(stt > 0.0)) throw ValidationError("front samples span no time");
  SpeedFit fit;
  fit.speed = stx / stt;
  fit.samples_used = m;
  double ssr = 0.0;
  for (std::size_t i = skip; i < total; ++i) {
    const double r = trajectory.fronts[i] - x_mean - fit.speed * (trajectory.times[i] - t_mean);
    ssr += r * r;
  }
  fit.standard_error = std::sqrt(ssr / static_cast<double>(m - 2) / stt);
  return fit;
}

double default_dx(const units::PhysicalParams& params) {
  return std::min(params.R0, kink_width(params) / kMinSitesPerWidth);
}

ChainState make_initial_state(const units::PhysicalParams& params, const InitialCondition& ic) {
  units::validate(params);
  const double dx = ic.dx > 0.0 ? ic.dx : default_dx(params);
  const double box = static_cast<double>(ic.n_grid) * dx;
  switch (ic.kind) {
    case InitialKind::kink: {
      const double center = ic.center >= 0.0 ? ic.center : 0.25 * box;
      return init_kink(params, ic.n_grid, dx, center, ic.boundary);
    }
    case InitialKind::kink_antikink: {
      const double c1 = ic.center >= 0.0 ? ic.center : 0.25 * box;
      const double c2 = ic.antikink_center >= 0.0 ? ic.antikink_center : 0.75 * box;
      return init_kink_antikink(params, ic.n_grid, dx, c1, c2);
    }
    case InitialKind::vacuum: {
      const double b = cubic::dominant_root(units::derive(params).sigma);
      return uniform_state(params, ic.n_grid, dx, b * units::displacement_scale(params),
                           ic.boundary);
    }
  }
  throw ValidationError("unknown initial condition");
}

Trajectory run(const units::PhysicalParams& params, const InitialCondition& ic, double t_end,
               const RunOptions& options, const TrajectorySink& sink) {
  return run_from(make_initial_state(params, ic), t_end, options, sink);
}

Trajectory run_from(ChainState state, double t_end, const RunOptions& options,
                    const TrajectorySink& sink) {
  validate(state);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be >= 0");
  if (options.sample_every == 0) throw ValidationError("sample_every must be >= 1");
  double dt = options.dt > 0.0 ? options.dt : auto_dt(state);
  if (options.dt < 0.0) throw ValidationError("dt must be > 0");
  if (!(dt < stable_dt(state)))
    throw ValidationError("dt = " + format_double(dt) + " s violates the stability bound " +
                          format_double(stable_dt(state)) + " s");

  double level = options.front_level;
  if (std::isnan(level)) {
    try {
      const auto r = cubic::roots_from_params(state.params);
      level = 0.5 * (r.a + r.b);
    } catch (const RegimeError&) {
      level = 0.0;
    }
  }

  const auto steps = t_end > 0.0 ? static_cast<std::size_t>(std::ceil(t_end / dt)) : 0;
  if (steps > 0) dt = t_end / static_cast<double>(steps);
  const double t0 = state.t;

  Trajectory traj;
  auto sample = [&] {
    traj.times.push_back(state.t);
    double front = std::numeric_limits<double>::quiet_NaN();
    try {
      front = front_position(state, level);
    } catch (const NumericalError&) {
    }
    traj.fronts.push_back(front);
    traj.energies.push_back(total_energy(state));
    if (sink) sink(state);
  };

  Stepper stepper(state, options.use_parallel);
  sample();
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.step(state, dt);
    state.t = t0 + static_cast<double>(k) * dt;
    stepper.resync(state);
    if (k % options.sample_every == 0 || k == steps) sample();
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace mtkink::chain
