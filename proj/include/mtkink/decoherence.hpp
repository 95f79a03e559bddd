#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include <Eigen/Dense>

namespace mtkink::decoherence {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double hbar_ev_s = 6.582119569e-16;

struct Tolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double positivity = 1e-10;  ///< lowest eigenvalue may dip this far below 0
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates against `tol`; throws ValidationError on failure.
  explicit DensityMatrix(Matrix entries, const Tolerances& tol = {});

  static DensityMatrix maximally_mixed(std::size_t dim);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex entry(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double purity() const;
  double min_eigenvalue() const;

 private:
  Matrix entries_;
};

/// Empty string when every invariant holds, else a description of the first
/// violation.
std::string check_invariants(const Matrix& rho, const Tolerances& tol = {});

/// Generator of drho/dt = (i/hbar)[rho, H] - Lambda [x, [x, rho]].
struct DephasingSpec {
  Matrix H;            ///< eV
  Matrix x_op;         ///< coupling operator, arbitrary length units
  double Lambda = 0.0; ///< 1/(s unit^2)
};

void validate(const DephasingSpec& spec, std::size_t dim);

/// Right-hand side of the master equation.
Matrix generator(const Matrix& rho, const DephasingSpec& spec);

/// Largest absolute eigenvalue of a Hermitian matrix.
double spectral_radius(const Matrix& hermitian);

/// dt (||H||/hbar + Lambda ||x||^2); evolve() requires this below 0.1.
double stability_number(const DephasingSpec& spec, double dt);

struct EvolveOptions {
  std::size_t check_every = 1;  ///< full positivity check cadence, in steps
  Tolerances tolerances{};
};

/// Called after every step with (step index, time, rho).
using EvolveObserver = std::function<void(std::size_t, double, const Matrix&)>;

/// Fixed-step RK4 in the interaction picture of H (the unitary part is exact),
/// re-Hermitized after every step. Aborts with
/// NumericalError if an invariant drifts beyond tolerance.
DensityMatrix evolve(const DensityMatrix& rho0, const DephasingSpec& spec, double dt,
                     std::size_t steps, const EvolveOptions& options = {},
                     const EvolveObserver& observer = {});

/// Time at which |entry| first drops below half its first sample, linearly
/// interpolated. `magnitudes` are |entry(i,j)| at `times`.
double offdiag_halflife(std::span<const double> times, std::span<const double> magnitudes);

/// Lambda that makes the (i,j) coherence e-fold in t_col for separation dx.
double lambda_for_collapse_time(double t_col, double dx);

struct CollapseEstimate {
  double M_gus = 0.0;    ///< eV
  double E_scale = 0.0;  ///< eV
  double N = 0.0;
  double t_col = 0.0;    ///< s
};

/// hbar M_gus / (E^2 N), seconds.
double collapse_time(double M_gus_ev, double E_scale_ev, double N);
/// hbar M_gus / (E^2 t_col).
double coherent_tubulins(double M_gus_ev, double E_scale_ev, double t_col);
CollapseEstimate estimate_from_count(double M_gus_ev, double E_scale_ev, double N);
CollapseEstimate estimate_from_time(double M_gus_ev, double E_scale_ev, double t_col);

/// Total tubulin count used for the brain-fraction figure.
inline constexpr double brain_tubulins = 1e13;

/// sqrt(L L_s), metres.
double measurability_bound(double L, double L_s);

}  // namespace mtkink::decoherence
