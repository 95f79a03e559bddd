#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "mtkink/chain_dynamics.hpp"
#include "mtkink/cubic_roots.hpp"
#include "mtkink/decoherence.hpp"
#include "mtkink/error.hpp"
#include "mtkink/format.hpp"
#include "mtkink/kink_analytic.hpp"
#include "mtkink/string_map.hpp"
#include "mtkink/units_params.hpp"

namespace mtkink::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- shared parameter handling ---------------------------------------------

// Flag spelling for each serialized field.
const std::map<std::string, std::string>& flag_for_field() {
  static const std::map<std::string, std::string> m = {
      {"M", "--M"},           {"A", "--A"},         {"B", "--B"},   {"k_stiff", "--k-stiff"},
      {"R0", "--R0"},         {"gamma", "--gamma"}, {"q", "--q"},   {"E_field", "--efield"},
      {"T", "--T"},           {"Tc", "--Tc"},       {"c_temp", "--c-temp"},
  };
  return m;
}

struct ParamOptions {
  std::string preset;
  std::string config;
  std::map<std::string, std::optional<double>> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "built-in or $MTKINK_PRESET_DIR preset (default paper)");
    cmd->add_option("--config", config, "parameter file, key=value or .json");
    for (const auto& name : units::field_names()) {
      auto& slot = overrides[name];
      cmd->add_option(flag_for_field().at(name), slot, "override " + name + " (SI)");
    }
  }

  bool overridden(const std::string& name) const {
    auto it = overrides.find(name);
    return it != overrides.end() && it->second.has_value();
  }

  // preset, then file, then flags. Touching T, Tc or c_temp without A
  // re-derives A from the temperature law.
  units::PhysicalParams resolve() const {
    units::PhysicalParams p = units::load_preset(preset.empty() ? "paper" : preset);
    if (!config.empty()) p = units::load_params_file(config, p);
    for (const auto& [name, value] : overrides)
      if (value) units::set_field(p, name, *value);
    const bool thermal = overridden("T") || overridden("Tc") || overridden("c_temp");
    if (thermal && !overridden("A")) p = units::params_from_temperature(p.c_temp, p.T, p.Tc, p);
    units::validate(p);
    return p;
  }
};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ValidationError("failed writing '" + path + "'");
}

std::string csv_number(double x) { return std::isfinite(x) ? format_double(x) : "nan"; }

// --- kink --------------------------------------------------------------------

struct KinkCmd {
  ParamOptions params;
  std::optional<double> sigma;
  std::string csv;
  double xi_min = -20.0;
  double xi_max = 20.0;
  std::size_t points = 401;

  void attach(CLI::App* cmd) {
    params.attach(cmd);
    cmd->add_option("--sigma", sigma, "dimensionless forcing; skips the physical parameters");
    cmd->add_option("--csv", csv, "profile CSV: xi, psi, dpsi_dxi, residual");
    cmd->add_option("--xi-min", xi_min, "profile start")->capture_default_str();
    cmd->add_option("--xi-max", xi_max, "profile end")->capture_default_str();
    cmd->add_option("--points", points, "profile samples")->capture_default_str();
  }

  int operator()(std::ostream& out) const {
    if (!(xi_max > xi_min) || points < 2)
      throw ValidationError("profile needs xi-max > xi-min and at least 2 points");
    cubic::CubicRoots roots;
    std::optional<units::PhysicalParams> p;
    if (sigma) {
      if (!std::isfinite(*sigma)) throw ValidationError("--sigma must be finite");
      roots = cubic::solve_force_cubic(*sigma);
    } else {
      p = params.resolve();
      roots = cubic::roots_from_params(*p);
    }
    const auto profile = kink::make_profile(roots);

    json j;
    j["roots"] = {{"a", roots.a}, {"d", roots.d}, {"b", roots.b}};
    j["sigma"] = roots.sigma;
    j["rho_consistent"] = profile.rho_consistent;
    double v_paper = kNaN, v_consistent = kNaN, delta = kNaN, m_star = kNaN, t_T = kNaN;
    if (p) {
      if (p->gamma == 0.0 || roots.d != 0.0) {
        v_paper = kink::kink_velocity(*p, roots.d, kink::VelocityMode::paper);
        v_consistent = kink::kink_velocity(*p, roots.d, kink::VelocityMode::consistent);
      }
      const double v0 = units::derive(*p).v0;
      if (std::isfinite(v_paper) && v_paper < v0) {
        const auto e = kink::kink_energetics(*p, v_paper);
        delta = units::convert_energy(e.Delta, "J", "eV");
        m_star = e.M_star;
      } else {
        delta = units::convert_energy(kink::kink_energetics(*p, 0.0).Delta, "J", "eV");
      }
      if (std::isfinite(v_paper) && v_paper > 0.0) t_T = kink::transfer_time(1e-6, v_paper);
    }
    j["v_paper"] = number_or_null(v_paper);
    j["v_consistent"] = number_or_null(v_consistent);
    j["Delta_eV"] = number_or_null(delta);
    j["M_star_kg"] = number_or_null(m_star);
    j["t_T_for_1um"] = number_or_null(t_T);

    if (!csv.empty()) {
      std::string text = "xi,psi,dpsi_dxi,residual\n";
      for (std::size_t i = 0; i < points; ++i) {
        const double xi = xi_min + (xi_max - xi_min) * static_cast<double>(i) /
                                       static_cast<double>(points - 1);
        text += csv_number(xi) + "," + csv_number(kink::kink_value(profile, xi)) + "," +
                csv_number(kink::kink_slope(profile, xi)) + "," +
                csv_number(kink::ode_residual(profile, profile.rho_consistent, roots.sigma, xi)) +
                "\n";
      }
      write_text(csv, text);
    }
    out << j.dump(2) << "\n";
    return 0;
  }
};

// --- simulate ----------------------------------------------------------------

struct SimulateCmd {
  ParamOptions params;
  std::size_t n_grid = 2048;
  double dx = 0.0;
  double dt = 0.0;
  std::optional<double> t_end;
  double sites = 20.0;
  std::size_t sample_every = 0;
  std::string initial = "kink";
  std::string boundary = "fixed";
  std::string csv;
  std::string snapshots;
  bool serial = false;

  void attach(CLI::App* cmd) {
    params.attach(cmd);
    cmd->add_option("--n-grid", n_grid, "grid sites")->capture_default_str();
    cmd->add_option("--dx", dx, "grid spacing, m (default min(R0, width/20))");
    cmd->add_option("--dt", dt, "time step, s (default 0.15/omega_max)");
    cmd->add_option("--t-end", t_end, "model time, s");
    cmd->add_option("--sites", sites,
                    "without --t-end: run until the predicted front moves this many sites")
        ->capture_default_str();
    cmd->add_option("--sample-every", sample_every, "steps between samples (default ~100 samples)");
    cmd->add_option("--initial", initial, "kink, pair or vacuum")
        ->check(CLI::IsMember({"kink", "pair", "vacuum"}))
        ->capture_default_str();
    cmd->add_option("--boundary", boundary, "fixed or periodic")
        ->check(CLI::IsMember({"fixed", "periodic"}))
        ->capture_default_str();
    cmd->add_option("--csv", csv, "trajectory CSV: t, front_x, energy");
    cmd->add_option("--snapshots", snapshots, "field snapshots CSV: t, u_0 .. u_{N-1}");
    cmd->add_flag("--serial", serial, "use the serial reference kernels");
  }

  int operator()(std::ostream& out) const {
    const auto p = params.resolve();
    chain::InitialCondition ic;
    ic.kind = initial == "kink"   ? chain::InitialKind::kink
              : initial == "pair" ? chain::InitialKind::kink_antikink
                                  : chain::InitialKind::vacuum;
    ic.n_grid = n_grid;
    ic.dx = dx;
    ic.boundary = (boundary == "periodic" || ic.kind == chain::InitialKind::kink_antikink)
                      ? chain::Boundary::periodic
                      : chain::Boundary::fixed_at_minima;
    if (dx < 0.0) throw ValidationError("--dx must be > 0");
    const auto state = chain::make_initial_state(p, ic);

    double v_pred = 0.0;
    if (ic.kind != chain::InitialKind::vacuum)
      v_pred = chain::seeding_velocity(p, cubic::roots_from_params(p));
    const double step = dt > 0.0 ? dt : chain::auto_dt(state);
    if (dt < 0.0) throw ValidationError("--dt must be > 0");
    double horizon;
    if (t_end) {
      horizon = *t_end;
    } else if (v_pred > 0.0) {
      if (!(sites > 0.0)) throw ValidationError("--sites must be > 0");
      horizon = sites * state.dx / v_pred;
    } else {
      horizon = 10000.0 * step;
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ValidationError("--t-end must be >= 0");
    const auto steps = horizon > 0.0 ? static_cast<std::size_t>(std::ceil(horizon / step)) : 0;

    chain::RunOptions opts;
    opts.dt = step;
    opts.sample_every = sample_every > 0 ? sample_every : std::max<std::size_t>(1, steps / 100);
    opts.use_parallel = !serial;

    std::string snap;
    chain::TrajectorySink sink;
    if (!snapshots.empty()) {
      snap = "t";
      for (std::size_t n = 0; n < state.size(); ++n) snap += ",u_" + std::to_string(n);
      snap += "\n";
      sink = [&snap](const chain::ChainState& s) {
        snap += csv_number(s.t);
        for (double u : s.u) snap += "," + csv_number(u);
        snap += "\n";
      };
    }
    const auto tr = chain::run_from(state, horizon, opts, sink);

    double v_meas = kNaN, stderr_v = kNaN;
    std::size_t used = 0;
    if (ic.kind != chain::InitialKind::vacuum) {
      try {
        const auto fit = chain::measure_speed(tr);
        v_meas = fit.speed;
        stderr_v = fit.standard_error;
        used = fit.samples_used;
      } catch (const ValidationError&) {
        // too few samples for a fit; reported as null
      }
    }
    const double e0 = tr.energies.front();
    double drift = 0.0;
    for (double e : tr.energies) drift = std::max(drift, std::abs(e - e0));
    // excitation: energy above the uniform lower-well state on the same grid
    const double lower = cubic::roots_from_params(p).a * units::displacement_scale(p);
    const double e_vac = chain::total_energy(
        chain::uniform_state(p, state.size(), state.dx, lower, chain::Boundary::periodic));
    const double excitation = e0 - e_vac;
    const double drift_excitation = excitation != 0.0 ? drift / std::abs(excitation) : kNaN;
    drift = e0 != 0.0 ? drift / std::abs(e0) : kNaN;

    if (!csv.empty()) {
      std::string text = "t,front_x,energy\n";
      for (std::size_t i = 0; i < tr.times.size(); ++i)
        text += csv_number(tr.times[i]) + "," + csv_number(tr.fronts[i]) + "," +
                csv_number(tr.energies[i]) + "\n";
      write_text(csv, text);
    }
    if (!snapshots.empty()) write_text(snapshots, snap);

    json j;
    j["v_measured"] = number_or_null(v_meas);
    j["v_predicted"] = v_pred;
    j["relative_error"] =
        number_or_null(v_pred != 0.0 && std::isfinite(v_meas) ? v_meas / v_pred - 1.0 : kNaN);
    j["speed_standard_error"] = number_or_null(stderr_v);
    j["fit_samples"] = used;
    j["energy_drift"] = number_or_null(drift);
    j["energy_drift_excitation"] = number_or_null(drift_excitation);
    j["energy_start_J"] = e0;
    j["energy_end_J"] = tr.energies.back();
    j["samples"] = tr.times.size();
    j["steps"] = steps;
    j["dt"] = steps > 0 ? horizon / static_cast<double>(steps) : step;
    j["dx"] = state.dx;
    j["n_grid"] = state.size();
    j["t_end"] = horizon;
    out << j.dump(2) << "\n";
    return 0;
  }
};

// --- stringmap ---------------------------------------------------------------

json frame_json(const strings::StringFrame& f) {
  json j;
  j["rho"] = f.rho;
  j["v_s_squared"] = f.v_s_squared;
  j["gamma_vs_squared"] = f.gamma_vs_squared;
  j["c_t"] = f.c_t;
  j["c_x"] = f.c_x;
  j["c_s"] = f.c_s ? json(*f.c_s) : json(nullptr);
  j["dilaton_slope"] = f.dilaton_slope;
  return j;
}

struct StringmapCmd {
  ParamOptions params;
  std::optional<double> rho;
  std::string mode = "consistent";
  bool adm = false;
  double k_level = 3.0;
  double a_dilaton = 0.0;
  double c_prop = 1.0;

  void attach(CLI::App* cmd) {
    params.attach(cmd);
    cmd->add_option("--rho", rho, "dimensionless friction; skips the physical parameters");
    cmd->add_option("--velocity-mode", mode, "paper or consistent")
        ->check(CLI::IsMember({"paper", "consistent"}))
        ->capture_default_str();
    cmd->add_flag("--adm", adm, "evaluate the toy mass law instead");
    cmd->add_option("--k", k_level, "level k > 2 (with --adm)")->capture_default_str();
    cmd->add_option("--a", a_dilaton, "dilaton offset a (with --adm)")->capture_default_str();
    cmd->add_option("--c-prop", c_prop, "proportionality constant (with --adm)")
        ->capture_default_str();
  }

  int operator()(std::ostream& out) const {
    json j;
    if (adm) {
      j["k_level"] = k_level;
      j["a_dilaton"] = a_dilaton;
      j["c_prop"] = c_prop;
      j["adm_mass"] = strings::adm_mass(k_level, a_dilaton, c_prop);
      out << j.dump(2) << "\n";
      return 0;
    }
    if (rho) {
      j = frame_json(strings::frame_from_rho(*rho));
      j["reality"] = nullptr;
      out << j.dump(2) << "\n";
      return 0;
    }
    const auto p = params.resolve();
    const auto roots = cubic::roots_from_params(p);
    const auto report = strings::reality_condition(p, roots.d);
    const double r = mode == "paper" ? report.rho_paper : report.rho_consistent;
    if (!(r > 0.0))
      throw RegimeError("friction rho is zero (gamma = 0): no string frame");
    j = frame_json(strings::frame_from_rho(r));
    j["velocity_mode"] = mode;
    j["reality"] = {{"printed", report.printed},
                    {"derived", report.derived},
                    {"agree", report.agree},
                    {"rho_paper", report.rho_paper},
                    {"rho_consistent", report.rho_consistent},
                    {"derived_consistent", report.derived_consistent}};
    out << j.dump(2) << "\n";
    return 0;
  }
};

// --- collapse ----------------------------------------------------------------

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("--pair expects i,j");
  double i = 0.0, j = 0.0;
  if (!parse_double(text.substr(0, comma), i) || !parse_double(text.substr(comma + 1), j) ||
      i < 0 || j < 0 || i != std::floor(i) || j != std::floor(j))
    throw ValidationError("--pair expects two non-negative integers, got '" + text + "'");
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

struct CollapseCmd {
  double mgus_gev = 1e18;
  double e_ev = 1.0;
  std::optional<double> t_sec;
  std::optional<double> count;
  bool bound = false;
  double L = 1e-6;
  double Ls = 1e-35;
  bool trace = false;
  std::size_t dim = 2;
  double lambda = 1e3;
  double x_spacing = 1.0;
  double h_ev = 0.0;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
  std::vector<std::string> pairs;
  std::string csv;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mgus-gev", mgus_gev, "string scale, GeV")->capture_default_str();
    cmd->add_option("--e-ev", e_ev, "energy stored in the kink, eV")->capture_default_str();
    cmd->add_option("--t-sec", t_sec, "collapse time, s (gives N)");
    cmd->add_option("--n", count, "coherent tubulins (gives the collapse time)");
    cmd->add_flag("--bound", bound, "measurability bound sqrt(L L_s)");
    cmd->add_option("--L", L, "length, m (with --bound)")->capture_default_str();
    cmd->add_option("--Ls", Ls, "string length, m (with --bound)")->capture_default_str();
    cmd->add_flag("--trace", trace, "dephasing trace of a superposition");
    cmd->add_option("--dim", dim, "Hilbert space dimension (with --trace)")->capture_default_str();
    cmd->add_option("--lambda", lambda, "dephasing rate, 1/(s unit^2)")->capture_default_str();
    cmd->add_option("--x-spacing", x_spacing, "x_op = diag(0, s, 2s, ...)")->capture_default_str();
    cmd->add_option("--h-ev", h_ev, "H = diag(0, h, 2h, ...) in eV")->capture_default_str();
    cmd->add_option("--dt", dt, "time step, s");
    cmd->add_option("--steps", steps, "number of steps");
    cmd->add_option("--pair", pairs, "entry i,j to record (repeatable, default 0,1)");
    cmd->add_option("--csv", csv, "trace CSV: t, |rho_ij| ..., purity");
  }

  int operator()(std::ostream& out) const {
    if (bound + trace > 1) throw ValidationError("choose one of --bound and --trace");
    json j;
    if (bound) {
      j["mode"] = "bound";
      j["L_m"] = L;
      j["L_s_m"] = Ls;
      j["delta_L_m"] = decoherence::measurability_bound(L, Ls);
      out << j.dump(2) << "\n";
      return 0;
    }
    if (trace) return run_trace(out);

    if (t_sec && count) throw ValidationError("give either --t-sec or --n, not both");
    const double m_ev = units::convert_energy(mgus_gev, "GeV", "eV");
    const auto est = count ? decoherence::estimate_from_count(m_ev, e_ev, *count)
                           : decoherence::estimate_from_time(m_ev, e_ev, t_sec.value_or(1.0));
    j["mode"] = "estimate";
    j["M_gus_eV"] = est.M_gus;
    j["E_scale_eV"] = est.E_scale;
    j["N"] = est.N;
    j["t_col_s"] = est.t_col;
    j["brain_fraction"] = est.N / decoherence::brain_tubulins;
    out << j.dump(2) << "\n";
    return 0;
  }

  int run_trace(std::ostream& out) const {
    using decoherence::Matrix;
    if (dim < 2) throw ValidationError("--dim must be >= 2");
    if (!(x_spacing > 0.0)) throw ValidationError("--x-spacing must be > 0");
    std::vector<std::pair<std::size_t, std::size_t>> ij;
    for (const auto& s : pairs) ij.push_back(parse_pair(s));
    if (ij.empty()) ij.emplace_back(0, 1);
    for (auto [i, k] : ij)
      if (i >= dim || k >= dim || i == k)
        throw ValidationError("--pair entries must be distinct indices below --dim");

    const auto n = static_cast<Eigen::Index>(dim);
    decoherence::DephasingSpec spec;
    spec.H = Matrix::Zero(n, n);
    spec.x_op = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      spec.H(k, k) = h_ev * static_cast<double>(k);
      spec.x_op(k, k) = x_spacing * static_cast<double>(k);
    }
    spec.Lambda = lambda;
    decoherence::validate(spec, dim);

    auto closed_form = [&](std::size_t i, std::size_t k) {
      const double dx = x_spacing * (static_cast<double>(i) - static_cast<double>(k));
      return lambda > 0.0 ? std::log(2.0) / (lambda * dx * dx) : kNaN;
    };
    double shortest = std::numeric_limits<double>::infinity(), longest = 0.0;
    for (auto [i, k] : ij) {
      shortest = std::min(shortest, closed_form(i, k));
      longest = std::max(longest, closed_form(i, k));
    }
    double h = 0.0;
    if (dt) {
      h = *dt;
    } else {
      h = std::numeric_limits<double>::infinity();
      if (lambda > 0.0) h = shortest / 400.0;
      const double rate = decoherence::stability_number(spec, 1.0);
      if (rate > 0.0) h = std::min(h, 0.05 / rate);
      if (!std::isfinite(h)) throw ValidationError("nothing evolves: give --dt and --steps");
    }
    const std::size_t count_steps =
        steps ? *steps
              : (lambda > 0.0 ? static_cast<std::size_t>(std::ceil(3.0 * longest / h)) : 1000);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(n);
    const auto rho0 = decoherence::DensityMatrix::pure(psi);

    std::vector<double> times{0.0};
    std::vector<std::vector<double>> mags(ij.size());
    std::vector<double> purity{rho0.purity()};
    for (std::size_t q = 0; q < ij.size(); ++q)
      mags[q].push_back(std::abs(rho0.entry(ij[q].first, ij[q].second)));
    decoherence::EvolveOptions opts;
    opts.check_every = 10;
    const auto final_rho = decoherence::evolve(
        rho0, spec, h, count_steps, opts, [&](std::size_t, double t, const Matrix& r) {
          times.push_back(t);
          for (std::size_t q = 0; q < ij.size(); ++q)
            mags[q].push_back(std::abs(r(static_cast<Eigen::Index>(ij[q].first),
                                         static_cast<Eigen::Index>(ij[q].second))));
          purity.push_back((r * r).trace().real());
        });

    if (!csv.empty()) {
      std::string text = "t";
      for (auto [i, k] : ij) text += ",abs_rho_" + std::to_string(i) + "_" + std::to_string(k);
      text += ",purity\n";
      for (std::size_t s = 0; s < times.size(); ++s) {
        text += csv_number(times[s]);
        for (const auto& m : mags) text += "," + csv_number(m[s]);
        text += "," + csv_number(purity[s]) + "\n";
      }
      write_text(csv, text);
    }

    json j;
    j["mode"] = "trace";
    j["dim"] = dim;
    j["Lambda"] = lambda;
    j["dt"] = h;
    j["steps"] = count_steps;
    json list = json::array();
    for (std::size_t q = 0; q < ij.size(); ++q) {
      const double measured = decoherence::offdiag_halflife(times, mags[q]);
      const double exact = closed_form(ij[q].first, ij[q].second);
      list.push_back({{"i", ij[q].first},
                      {"j", ij[q].second},
                      {"half_life_measured", measured},
                      {"half_life_closed_form", number_or_null(exact)},
                      {"relative_error", number_or_null(measured / exact - 1.0)}});
    }
    j["pairs"] = list;
    j["final_purity"] = final_rho.purity();
    out << j.dump(2) << "\n";
    return 0;
  }
};

// --- sweep -------------------------------------------------------------------

struct SweepRow {
  double value = kNaN;
  double sigma = kNaN;
  std::string regime;
  double a = kNaN, d = kNaN, b = kNaN;
  double v_consistent = kNaN, v_paper = kNaN, rho = kNaN, c_s = kNaN;
  std::optional<bool> printed, derived;
};

SweepRow sweep_point(units::PhysicalParams p, const std::string& var, double value) {
  SweepRow row;
  row.value = value;
  try {
    if (var == "E_field") {
      p.E_field = value;
    } else if (var == "gamma") {
      p.gamma = value;
    } else {
      p = units::params_from_temperature(p.c_temp, value, p.Tc, p);
    }
    units::validate(p);
    row.sigma = units::derive(p).sigma;
    const auto roots = cubic::solve_force_cubic(row.sigma);
    row.regime = "kink";
    row.a = roots.a;
    row.d = roots.d;
    row.b = roots.b;
    row.rho = kink::make_profile(roots).rho_consistent;
    if (p.gamma == 0.0 || roots.d != 0.0) {
      row.v_consistent = kink::kink_velocity(p, roots.d, kink::VelocityMode::consistent);
      row.v_paper = kink::kink_velocity(p, roots.d, kink::VelocityMode::paper);
    }
    if (roots.d != 0.0) {
      const auto r = strings::reality_condition(p, roots.d);
      row.printed = r.printed;
      row.derived = r.derived;
    }
    if (row.rho > 0.0) {
      const auto f = strings::frame_from_rho(row.rho);
      if (f.c_s) row.c_s = *f.c_s;
    }
  } catch (const cubic::KinkRegimeLost&) {
    row.regime = "kink_lost";
  } catch (const RegimeError&) {
    row.regime = "no_double_well";
  } catch (const ValidationError&) {
    row.regime = "invalid";
  }
  return row;
}

struct SweepCmd {
  ParamOptions params;
  std::string var = "E_field";
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 11;
  bool log_spacing = false;
  std::string csv;

  void attach(CLI::App* cmd) {
    params.attach(cmd);
    cmd->add_option("--var", var, "E_field, T or gamma")
        ->check(CLI::IsMember({"E_field", "T", "gamma"}))
        ->capture_default_str();
    cmd->add_option("--from", from, "first value")->required();
    cmd->add_option("--to", to, "last value")->required();
    cmd->add_option("--points", points, "number of values")->capture_default_str();
    cmd->add_flag("--log", log_spacing, "geometric spacing");
    cmd->add_option("--csv", csv, "write the table here instead of stdout");
  }

  int operator()(std::ostream& out) const {
    const auto base = params.resolve();
    if (points == 0) throw ValidationError("--points must be >= 1");
    if (!std::isfinite(from) || !std::isfinite(to)) throw ValidationError("bounds must be finite");
    if (log_spacing && !(from > 0.0 && to > 0.0))
      throw ValidationError("--log needs positive bounds");
    std::vector<double> values(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
      values[i] = log_spacing ? from * std::pow(to / from, f) : from + (to - from) * f;
    }
    values.back() = to;

    std::vector<SweepRow> rows(points);
    const auto count = static_cast<std::ptrdiff_t>(points);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i)
      rows[static_cast<std::size_t>(i)] = sweep_point(base, var, values[static_cast<std::size_t>(i)]);

    auto cell = [](double x) { return std::isfinite(x) ? format_double(x) : std::string(); };
    auto flag = [](const std::optional<bool>& b) {
      return b ? std::string(*b ? "true" : "false") : std::string();
    };
    std::string text =
        "value,sigma,regime,a,d,b,v_consistent,v_paper,rho,reality_printed,reality_derived,c_s\n";
    for (const auto& r : rows)
      text += cell(r.value) + "," + cell(r.sigma) + "," + r.regime + "," + cell(r.a) + "," +
              cell(r.d) + "," + cell(r.b) + "," + cell(r.v_consistent) + "," + cell(r.v_paper) +
              "," + cell(r.rho) + "," + flag(r.printed) + "," + flag(r.derived) + "," +
              cell(r.c_s) + "\n";
    if (csv.empty())
      out << text;
    else
      write_text(csv, text);
    return 0;
  }
};

// --- preset ------------------------------------------------------------------

struct PresetCmd {
  std::string name;
  std::string format = "kv";
  bool list = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("name", name, "preset to print");
    cmd->add_option("--format", format, "kv or json")
        ->check(CLI::IsMember({"kv", "json"}))
        ->capture_default_str();
    cmd->add_flag("--list", list, "list the built-in presets");
  }

  int operator()(std::ostream& out) const {
    if (list) {
      for (const auto& n : units::preset_names()) out << n << "\n";
      return 0;
    }
    if (name.empty()) throw ValidationError("preset name required (or --list)");
    const auto p = units::load_preset(name);
    out << (format == "json" ? units::to_json(p) : units::to_kv(p));
    return 0;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kink dynamics and diagnostics for the dimer-chain double-well model"};
  app.name("mtkink");
  app.require_subcommand(1);

  KinkCmd kink_cmd;
  SimulateCmd sim_cmd;
  StringmapCmd string_cmd;
  CollapseCmd collapse_cmd;
  SweepCmd sweep_cmd;
  PresetCmd preset_cmd;
  auto* kink = app.add_subcommand("kink", "closed-form front: roots, velocity, energy, profile");
  auto* sim = app.add_subcommand("simulate", "integrate the discrete chain and fit the front speed");
  auto* smap = app.add_subcommand("stringmap", "central charges and the reality condition");
  auto* coll = app.add_subcommand("collapse", "collapse time, tubulin count, dephasing traces");
  auto* sweep = app.add_subcommand("sweep", "scan E_field, T or gamma");
  auto* preset = app.add_subcommand("preset", "print a parameter preset");
  kink_cmd.attach(kink);
  sim_cmd.attach(sim);
  string_cmd.attach(smap);
  collapse_cmd.attach(coll);
  sweep_cmd.attach(sweep);
  preset_cmd.attach(preset);

  std::vector<const char*> argv{"mtkink"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (kink->parsed()) return kink_cmd(out);
    if (sim->parsed()) return sim_cmd(out);
    if (smap->parsed()) return string_cmd(out);
    if (coll->parsed()) return collapse_cmd(out);
    if (sweep->parsed()) return sweep_cmd(out);
    if (preset->parsed()) return preset_cmd(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 2;
}

}  // namespace mtkink::cli
