#include "mtkink/units_params.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtkink/error.hpp"
#include "mtkink/format.hpp"

namespace mtkink::units {

namespace {

struct FieldRef {
  const char* name;
  double PhysicalParams::*member;
};

constexpr FieldRef kFields[] = {
    {"M", &PhysicalParams::M},
    {"A", &PhysicalParams::A},
    {"B", &PhysicalParams::B},
    {"k_stiff", &PhysicalParams::k_stiff},
    {"R0", &PhysicalParams::R0},
    {"gamma", &PhysicalParams::gamma},
    {"q", &PhysicalParams::q},
    {"E_field", &PhysicalParams::E_field},
    {"T", &PhysicalParams::T},
    {"Tc", &PhysicalParams::Tc},
    {"c_temp", &PhysicalParams::c_temp},
};

// Frozen output of tools/fit_paper_preset.py. Targets: v0 = 1 km/s, kink
// velocity 2 m/s under both velocity formulas, binding energy 1 eV, effective
// mass 5e-27 kg, q = 36e, sigma = 3e-3.
PhysicalParams paper_preset() {
  PhysicalParams p;
  p.M = 1.2248025879512909e-20;
  p.A = 1000000.0326609993;
  p.B = 1.207741158373875e+34;
  p.k_stiff = 4102751158.0360603;
  p.R0 = 1.7278371108594472e-12;
  p.gamma = 3.5216372166108878e-07;
  p.q = 36.0 * constants::elementary_charge;
  p.E_field = 4732835.9165051039;
  p.Tc = 300.0;
  p.T = 299.0;
  p.c_temp = p.A;  // A = c_temp * (Tc - T) with Tc - T = 1 K
  return p;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open parameter file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : kFields) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

void set_field(PhysicalParams& p, std::string_view key, double value) {
  for (const auto& f : kFields) {
    if (key == f.name) {
      p.*(f.member) = value;
      return;
    }
  }
  throw ValidationError("unknown parameter '" + std::string(key) + "'");
}

void validate(const PhysicalParams& p) {
  for (const auto& f : kFields) {
    if (!std::isfinite(p.*(f.member)))
      throw ValidationError(std::string("parameter ") + f.name + " is not finite");
  }
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
  };
  require(p.M > 0, "M must be > 0");
  require(p.B > 0, "B must be > 0");
  require(p.k_stiff > 0, "k_stiff must be > 0");
  require(p.R0 > 0, "R0 must be > 0");
  require(p.gamma >= 0, "gamma must be >= 0");
  require(p.Tc > 0, "Tc must be > 0");
  require(p.c_temp > 0, "c_temp must be > 0");
  if (!(p.A > 0)) throw RegimeError("potential not double-well: A must be > 0 (T < Tc)");
}

PhysicalParams params_from_temperature(double c_temp, double T, double Tc,
                                       const PhysicalParams& rest) {
  if (!(Tc > 0)) throw ValidationError("Tc must be > 0");
  if (!(c_temp > 0)) throw ValidationError("c_temp must be > 0");
  if (!(T < Tc))
    throw RegimeError("potential not double-well: T >= Tc gives A <= 0");
  PhysicalParams p = rest;
  p.c_temp = c_temp;
  p.T = T;
  p.Tc = Tc;
  p.A = c_temp * (Tc - T);
  validate(p);
  return p;
}

double DerivedQuantities::alpha(double v) const {
  if (!(v >= 0 && v < v0)) throw ValidationError("alpha(v) requires 0 <= v < v0");
  return std::sqrt(abs_A / (M * (v0 * v0 - v * v)));
}

double DerivedQuantities::rho(double v) const {
  if (!(v >= 0 && v < v0)) throw ValidationError("rho(v) requires 0 <= v < v0");
  return gamma * v / std::sqrt(M * abs_A * (v0 * v0 - v * v));
}

DerivedQuantities derive(const PhysicalParams& p) {
  validate(p);
  DerivedQuantities d;
  d.v0 = std::sqrt(p.k_stiff / p.M) * p.R0;
  d.abs_A = std::abs(p.A);
  d.sigma = p.q * std::sqrt(p.B) * std::pow(d.abs_A, -1.5) * p.E_field;
  d.M = p.M;
  d.gamma = p.gamma;
  return d;
}

double displacement_scale(const PhysicalParams& p) { return std::sqrt(p.A / p.B); }

EnergyUnit parse_energy_unit(std::string_view tag) {
  const std::string t = lower(tag);
  if (t == "j") return EnergyUnit::joule;
  if (t == "ev") return EnergyUnit::electronvolt;
  if (t == "gev") return EnergyUnit::gigaelectronvolt;
  throw ValidationError("unknown energy unit '" + std::string(tag) + "'");
}

double convert_energy(double value, EnergyUnit from, EnergyUnit to) {
  if (!std::isfinite(value)) throw ValidationError("energy value is not finite");
  if (from == to) return value;
  auto to_ev = [](double x, EnergyUnit u) {
    switch (u) {
      case EnergyUnit::joule: return x / constants::joule_per_ev;
      case EnergyUnit::electronvolt: return x;
      case EnergyUnit::gigaelectronvolt: return x * constants::ev_per_gev;
    }
    return x;
  };
  const double ev = to_ev(value, from);
  switch (to) {
    case EnergyUnit::joule: return ev * constants::joule_per_ev;
    case EnergyUnit::electronvolt: return ev;
    case EnergyUnit::gigaelectronvolt: return ev / constants::ev_per_gev;
  }
  return ev;
}

double convert_energy(double value, std::string_view from, std::string_view to) {
  return convert_energy(value, parse_energy_unit(from), parse_energy_unit(to));
}

std::vector<std::string> preset_names() { return {"paper", "zero-friction", "strong-field"}; }

PhysicalParams load_preset(std::string_view name) {
  if (name == "paper") return paper_preset();
  if (name == "zero-friction") {
    auto p = paper_preset();
    p.gamma = 0.0;
    return p;
  }
  if (name == "strong-field") {
    auto p = paper_preset();
    p.E_field *= 100.0;
    return p;
  }
  if (const char* dir = std::getenv("MTKINK_PRESET_DIR"); dir && *dir) {
    const std::filesystem::path base(dir);
    for (const char* ext : {".cfg", ".json"}) {
      auto path = base / (std::string(name) + ext);
      if (std::filesystem::exists(path)) {
        auto p = load_params_file(path);
        validate(p);
        return p;
      }
    }
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

PhysicalParams parse_params_kv(std::string_view text, const PhysicalParams& base) {
  PhysicalParams p = base;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("line " + std::to_string(lineno) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    double value = 0;
    if (!parse_double(trim(line.substr(eq + 1)), value))
      throw ValidationError("line " + std::to_string(lineno) + ": bad number for '" +
                            std::string(key) + "'");
    set_field(p, key, value);
  }
  return p;
}

std::string to_kv(const PhysicalParams& p) {
  std::string out = "# SI units\n";
  for (const auto& f : kFields) {
    out += f.name;
    out += " = ";
    out += format_double(p.*(f.member));
    out += '\n';
  }
  return out;
}

PhysicalParams parse_params_json(std::string_view text, const PhysicalParams& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("parameter JSON must be an object");
  PhysicalParams p = base;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it->is_number()) throw ValidationError("parameter '" + it.key() + "' must be a number");
    set_field(p, it.key(), it->get<double>());
  }
  return p;
}

std::string to_json(const PhysicalParams& p) {
  nlohmann::ordered_json j;
  for (const auto& f : kFields) j[f.name] = p.*(f.member);
  return j.dump(2) + "\n";
}

PhysicalParams load_params_file(const std::filesystem::path& path, const PhysicalParams& base) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") return parse_params_json(text, base);
  return parse_params_kv(text, base);
}

}  // namespace mtkink::units
