#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mtkink::units {

namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double joule_per_ev = 1.602176634e-19;
inline constexpr double ev_per_gev = 1.0e9;
inline constexpr double hbar_ev_s = 6.582119569e-16;  // eV s
}  // namespace constants

/// Dimensional constants of a single protofilament chain, SI units throughout.
struct PhysicalParams {
  double M = 0.0;        ///< mass per dimer, kg
  double A = 0.0;        ///< quadratic potential coefficient, J/m^2
  double B = 0.0;        ///< quartic potential coefficient, J/m^4
  double k_stiff = 0.0;  ///< longitudinal stiffness, J/m^2
  double R0 = 0.0;       ///< equilibrium dimer spacing, m
  double gamma = 0.0;    ///< friction coefficient, kg/s
  double q = 0.0;        ///< mobile charge, C
  double E_field = 0.0;  ///< electric field, V/m
  double T = 0.0;        ///< temperature, K
  double Tc = 0.0;       ///< critical temperature, K
  double c_temp = 1.0;   ///< magnitude of the temperature-law constant, J/(m^2 K)

  bool operator==(const PhysicalParams&) const = default;
};

/// Throws ValidationError naming the first violated constraint. A <= 0 is a
/// RegimeError: the potential no longer has two degenerate minima.
void validate(const PhysicalParams& p);

/// A = c_temp (Tc - T); every other field is taken from `rest`.
PhysicalParams params_from_temperature(double c_temp, double T, double Tc,
                                       const PhysicalParams& rest);

struct DerivedQuantities {
  double v0 = 0.0;     ///< sound velocity sqrt(k/M) R0, m/s
  double sigma = 0.0;  ///< dimensionless forcing q sqrt(B) |A|^{-3/2} E

  /// Inverse length of the co-moving coordinate, 1/m. Defined on [0, v0).
  double alpha(double v) const;
  /// Dimensionless friction of the traveling-wave equation. Defined on [0, v0).
  double rho(double v) const;

  double M = 0.0;
  double abs_A = 0.0;
  double gamma = 0.0;
};

DerivedQuantities derive(const PhysicalParams& p);

/// sqrt(A/B): displacement scale of the normalized field, m.
double displacement_scale(const PhysicalParams& p);

enum class EnergyUnit { joule, electronvolt, gigaelectronvolt };

EnergyUnit parse_energy_unit(std::string_view tag);
double convert_energy(double value, EnergyUnit from, EnergyUnit to);
double convert_energy(double value, std::string_view from, std::string_view to);

// Preset registry --------------------------------------------------------

/// Names of the built-in presets.
std::vector<std::string> preset_names();

/// Built-in presets first; otherwise <dir>/<name>.cfg or <dir>/<name>.json
/// under $MTKINK_PRESET_DIR.
PhysicalParams load_preset(std::string_view name);

/// key=value text, one parameter per line, '#' starts a comment. Keys not
/// present keep the values of `base`.
PhysicalParams parse_params_kv(std::string_view text,
                               const PhysicalParams& base = {});
std::string to_kv(const PhysicalParams& p);

PhysicalParams parse_params_json(std::string_view text,
                                 const PhysicalParams& base = {});
std::string to_json(const PhysicalParams& p);

/// Dispatches on extension: .json parses JSON, anything else key=value.
PhysicalParams load_params_file(const std::filesystem::path& path,
                                const PhysicalParams& base = {});

/// Sets one field by its serialized name; unknown names are a ValidationError.
void set_field(PhysicalParams& p, std::string_view key, double value);

/// Serialized field names, in file order.
const std::vector<std::string>& field_names();

}  // namespace mtkink::units
