#pragma once

#include "mtkink/error.hpp"
#include "mtkink/units_params.hpp"

namespace mtkink::cubic {

/// Real roots of psi^3 - psi - sigma, ordered a <= d <= b.
struct CubicRoots {
  double a = 0.0;  ///< smallest root
  double d = 0.0;  ///< middle root
  double b = 0.0;  ///< largest root
  double sigma = 0.0;
};

/// Thrown when |sigma| is at or beyond the critical forcing: only one real
/// root survives and the bounded kink no longer exists.
class KinkRegimeLost : public RegimeError {
 public:
  KinkRegimeLost(double sigma, double lone_root);
  double sigma() const noexcept { return sigma_; }
  double lone_root() const noexcept { return lone_root_; }

 private:
  double sigma_;
  double lone_root_;
};

/// 2/(3 sqrt 3): discriminant zero of psi^3 - psi - sigma.
double critical_sigma();

/// Forcing within this distance of the critical value is reported as lost.
inline constexpr double critical_margin = 1e-9;

CubicRoots solve_force_cubic(double sigma);

/// solve_force_cubic(derive(params).sigma)
CubicRoots roots_from_params(const units::PhysicalParams& params);

/// The real root of largest magnitude (the only one once |sigma| > sigma_c).
double dominant_root(double sigma);

inline double force_cubic(double psi, double sigma) { return psi * psi * psi - psi - sigma; }

}  // namespace mtkink::cubic
