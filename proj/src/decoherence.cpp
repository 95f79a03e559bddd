#include "mtkink/decoherence.hpp"

#include <cmath>
#include <string>

#include "mtkink/error.hpp"
#include "mtkink/format.hpp"

namespace mtkink::decoherence {

namespace {

const Complex kI{0.0, 1.0};

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(what) + " must be positive");
}

}  // namespace

std::string check_invariants(const Matrix& rho, const Tolerances& tol) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) return "density matrix must be square, dim > 0";
  if (!rho.allFinite()) return "density matrix has non-finite entries";
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) return "not Hermitian (deviation " + format_double(herm) + ")";
  const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_err > tol.trace) return "trace differs from 1 by " + format_double(trace_err);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -tol.positivity) return "not positive semidefinite (eigenvalue " +
                                       format_double(lowest) + ")";
  return {};
}

DensityMatrix::DensityMatrix(Matrix entries, const Tolerances& tol)
    : entries_(std::move(entries)) {
  if (auto why = check_invariants(entries_, tol); !why.empty()) throw ValidationError(why);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw ValidationError("dim must be > 0");
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw ValidationError("state vector must be nonzero");
  return DensityMatrix(psi * psi.adjoint() / norm2);
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_radius(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void validate(const DephasingSpec& spec, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (spec.H.rows() != n || spec.H.cols() != n) throw ValidationError("H has the wrong shape");
  if (spec.x_op.rows() != n || spec.x_op.cols() != n)
    throw ValidationError("x_op has the wrong shape");
  if (!(spec.Lambda >= 0.0) || !std::isfinite(spec.Lambda))
    throw ValidationError("Lambda must be >= 0");
  constexpr double tol = 1e-12;
  if ((spec.H - spec.H.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("H must be Hermitian");
  if ((spec.x_op - spec.x_op.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw ValidationError("x_op must be Hermitian");
}

Matrix generator(const Matrix& rho, const DephasingSpec& spec) {
  Matrix out = (kI / hbar_ev_s) * (rho * spec.H - spec.H * rho);
  if (spec.Lambda != 0.0) {
    const Matrix inner = spec.x_op * rho - rho * spec.x_op;
    out -= spec.Lambda * (spec.x_op * inner - inner * spec.x_op);
  }
  return out;
}

double stability_number(const DephasingSpec& spec, double dt) {
  const double xr = spectral_radius(spec.x_op);
  return dt * (spectral_radius(spec.H) / hbar_ev_s + spec.Lambda * xr * xr);
}

DensityMatrix evolve(const DensityMatrix& rho0, const DephasingSpec& spec, double dt,
                     std::size_t steps, const EvolveOptions& options,
                     const EvolveObserver& observer) {
  validate(spec, rho0.dim());
  require_positive(dt, "dt");
  if (options.check_every == 0) throw ValidationError("check_every must be >= 1");
  const double stiffness = stability_number(spec, dt);
  if (!(stiffness < 0.1))
    throw ValidationError("dt too large: dt (||H||/hbar + Lambda ||x||^2) = " +
                          format_double(stiffness) + " must be < 0.1");

  const Tolerances& tol = options.tolerances;
  // Integrating-factor RK4: the Hamiltonian part is applied exactly as a phase
  // in the eigenbasis of H, the double commutator goes through the RK4 stages.
  // With Lambda = 0 the step is unitary to rounding.
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(spec.H));
  const Matrix V = es.eigenvectors();
  const Eigen::VectorXd energies = es.eigenvalues();
  const auto n = static_cast<Eigen::Index>(rho0.dim());
  Matrix half_phase(n, n), full_phase(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double w = (energies(j) - energies(k)) / hbar_ev_s;
      half_phase(j, k) = std::exp(-kI * (0.5 * dt * w));
      full_phase(j, k) = std::exp(-kI * (dt * w));
    }
  DephasingSpec local;
  local.H = Matrix::Zero(n, n);
  local.x_op = V.adjoint() * spec.x_op * V;
  local.Lambda = spec.Lambda;
  auto half = [&](const Matrix& m) -> Matrix { return m.cwiseProduct(half_phase); };
  auto full = [&](const Matrix& m) -> Matrix { return m.cwiseProduct(full_phase); };

  Matrix rho = V.adjoint() * rho0.entries() * V;
  Matrix lab;
  for (std::size_t k = 1; k <= steps; ++k) {
    const Matrix mid = half(rho);
    const Matrix k1 = generator(rho, local);
    const Matrix k2 = generator(mid + (0.5 * dt) * half(k1), local);
    const Matrix k3 = generator(mid + (0.5 * dt) * k2, local);
    const Matrix k4 = generator(full(rho) + dt * half(k3), local);
    rho = full(rho) + (dt / 6.0) * (full(k1) + 2.0 * half(k2 + k3) + k4);
    rho = hermitize(rho);
    lab = V * rho * V.adjoint();

    const double trace_err = std::abs(lab.trace() - Complex(1.0, 0.0));
    if (!(trace_err <= tol.trace))
      throw NumericalError("trace drifted by " + format_double(trace_err) + " at step " +
                           std::to_string(k));
    if (k % options.check_every == 0 || k == steps) {
      if (auto why = check_invariants(lab, tol); !why.empty())
        throw NumericalError("invariant lost at step " + std::to_string(k) + ": " + why);
    }
    if (observer) observer(k, static_cast<double>(k) * dt, lab);
  }
  if (steps == 0) lab = rho0.entries();
  return DensityMatrix(std::move(lab), tol);
}

double offdiag_halflife(std::span<const double> times, std::span<const double> magnitudes) {
  if (times.size() != magnitudes.size() || times.size() < 2)
    throw ValidationError("need matching time and magnitude samples (at least two)");
  const double half = 0.5 * magnitudes[0];
  if (!(half > 0.0)) throw ValidationError("initial coherence must be nonzero");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (magnitudes[i] < half) {
      const double m0 = magnitudes[i - 1];
      const double m1 = magnitudes[i];
      const double frac = (m0 - half) / (m0 - m1);
      return times[i - 1] + frac * (times[i] - times[i - 1]);
    }
  }
  throw NumericalError("no decay: coherence never fell below half its initial value");
}

double lambda_for_collapse_time(double t_col, double dx) {
  require_positive(t_col, "t_col");
  require_positive(dx, "dx");
  return 1.0 / (t_col * dx * dx);
}

double collapse_time(double M_gus_ev, double E_scale_ev, double N) {
  require_positive(M_gus_ev, "M_gus");
  require_positive(E_scale_ev, "E_scale");
  require_positive(N, "N");
  return hbar_ev_s * M_gus_ev / (E_scale_ev * E_scale_ev * N);
}

double coherent_tubulins(double M_gus_ev, double E_scale_ev, double t_col) {
  require_positive(M_gus_ev, "M_gus");
  require_positive(E_scale_ev, "E_scale");
  require_positive(t_col, "t_col");
  return hbar_ev_s * M_gus_ev / (E_scale_ev * E_scale_ev * t_col);
}

CollapseEstimate estimate_from_count(double M_gus_ev, double E_scale_ev, double N) {
  return {M_gus_ev, E_scale_ev, N, collapse_time(M_gus_ev, E_scale_ev, N)};
}

CollapseEstimate estimate_from_time(double M_gus_ev, double E_scale_ev, double t_col) {
  return {M_gus_ev, E_scale_ev, coherent_tubulins(M_gus_ev, E_scale_ev, t_col), t_col};
}

double measurability_bound(double L, double L_s) {
  require_positive(L, "L");
  require_positive(L_s, "L_s");
  return std::sqrt(L * L_s);
}

}  // namespace mtkink::decoherence
