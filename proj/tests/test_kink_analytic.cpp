#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mtkink/kink_analytic.hpp"
#include "support/oracles.hpp"

using namespace mtkink;
using namespace mtkink::kink;

namespace {

double max_residual(const KinkProfile& p, double rho) {
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double xi = -20.0 + 40.0 * i / 4000.0;
    worst = std::max(worst, std::abs(ode_residual(p, rho, p.roots.sigma, xi)));
  }
  return worst;
}

units::PhysicalParams unit_params() {
  units::PhysicalParams p;
  p.M = 1.0;
  p.A = 1.0;
  p.B = 1.0;
  p.k_stiff = 1.0;
  p.R0 = 1.0;
  p.gamma = 0.3;
  p.q = 1.0;
  p.E_field = 0.1;
  p.T = 1.0;
  p.Tc = 2.0;
  return p;
}

}  // namespace

TEST_CASE("symmetric profile reduces to -tanh(xi/sqrt 2)") {
  const auto p = make_profile(cubic::solve_force_cubic(0.0));
  CHECK(kink_value(p, 0.0) == doctest::Approx(0.0));
  CHECK(p.rho_consistent == doctest::Approx(0.0));
  for (int i = -400; i <= 400; ++i) {
    const double xi = i * 0.05;
    REQUIRE(std::abs(kink_value(p, xi) + std::tanh(xi / std::numbers::sqrt2)) < 1e-12);
  }
}

TEST_CASE("profile limits and saturation") {
  const auto p = make_profile(cubic::solve_force_cubic(0.2));
  CHECK(kink_value(p, 1e6) == p.roots.a);
  CHECK(kink_value(p, -1e6) == p.roots.b);
  CHECK(kink_slope(p, 1e6) == 0.0);
  CHECK(std::isfinite(kink_curvature(p, -1e300)));
  const double mid = 0.5 * (p.roots.a + p.roots.b);
  CHECK(kink_value(p, 0.0) == doctest::Approx(mid));
  const auto shifted = make_profile(cubic::solve_force_cubic(0.2), 3.0);
  CHECK(kink_value(shifted, 3.0) == doctest::Approx(mid));
}

TEST_CASE("closed-form derivatives agree with finite differences") {
  const auto p = make_profile(cubic::solve_force_cubic(-0.17), 0.4);
  for (double xi : {-6.0, -1.3, 0.0, 0.4, 2.2, 7.5}) {
    auto f = [&](double x) { return kink_value(p, x); };
    auto g = [&](double x) { return kink_slope(p, x); };
    CHECK(kink_slope(p, xi) == doctest::Approx(oracle::central_difference(f, xi, 1e-5)).epsilon(1e-7));
    CHECK(kink_curvature(p, xi) ==
          doctest::Approx(oracle::central_difference(g, xi, 1e-5)).epsilon(1e-6));
  }
}

TEST_CASE("the profile is an exact solution only at the consistent friction") {
  for (double s : {-0.3, -0.05, 0.0, 0.1, 0.3, 0.38}) {
    const auto p = make_profile(cubic::solve_force_cubic(s));
    CHECK(p.rho_consistent == doctest::Approx(-3.0 * p.roots.d / std::numbers::sqrt2));
    CHECK(max_residual(p, p.rho_consistent) < 1e-10);
    CHECK(max_residual(p, p.rho_consistent + 0.1) > 1e-3);
  }
}

TEST_CASE("monotone front") {
  const auto p = make_profile(cubic::solve_force_cubic(0.25));
  double prev = kink_value(p, -30.0);
  for (int i = 1; i <= 6000; ++i) {
    const double xi = -30.0 + 60.0 * i / 6000.0;
    const double v = kink_value(p, xi);
    REQUIRE(v <= prev);
    REQUIRE(kink_slope(p, xi) <= 0.0);
    prev = v;
  }
}

TEST_CASE("kink velocity modes") {
  auto p = unit_params();
  const double v0 = units::derive(p).v0;

  auto frictionless = p;
  frictionless.gamma = 0.0;
  CHECK(kink_velocity(frictionless, -0.1, VelocityMode::paper) == v0);
  CHECK(kink_velocity(frictionless, -0.1, VelocityMode::consistent) == v0);

  // 2 gamma^2 / (9 d^2 M |A|) = 1
  const double d = -0.2;
  p.gamma = std::sqrt(4.5 * d * d * p.M * p.A);
  CHECK(kink_velocity(p, d, VelocityMode::consistent) ==
        doctest::Approx(v0 / std::numbers::sqrt2).epsilon(1e-14));

  CHECK_THROWS_AS(kink_velocity(p, 0.0, VelocityMode::paper), RegimeError);
  CHECK_THROWS_AS(kink_velocity(p, +0.2, VelocityMode::consistent), ValidationError);

  // consistent velocity makes rho(v) equal -3d/sqrt 2
  const auto roots = cubic::roots_from_params(p);
  const double v = kink_velocity(p, roots.d);
  CHECK(units::derive(p).rho(v) ==
        doctest::Approx(make_profile(roots).rho_consistent).epsilon(1e-12));
}

TEST_CASE("velocity ordering") {
  auto p = unit_params();
  const double v0 = units::derive(p).v0;
  double prev = 0.0;
  for (double d : {-0.01, -0.05, -0.1, -0.3, -0.5}) {
    for (auto mode : {VelocityMode::paper, VelocityMode::consistent}) {
      const double v = kink_velocity(p, d, mode);
      CHECK(v > 0.0);
      CHECK(v < v0);
    }
    const double v = kink_velocity(p, d);
    CHECK(v > prev);
    prev = v;
  }
  auto more = p;
  more.gamma *= 2.0;
  CHECK(kink_velocity(more, -0.1) < kink_velocity(p, -0.1));
}

TEST_CASE("paper preset velocity, energetics and transfer time") {
  const auto p = units::load_preset("paper");
  const double d = cubic::roots_from_params(p).d;
  const double v = kink_velocity(p, d, VelocityMode::paper);
  CHECK(v == doctest::Approx(2.0).epsilon(0.01));
  CHECK(kink_velocity(p, d) == doctest::Approx(2.0).epsilon(0.01));
  const auto e = kink_energetics(p, v);
  CHECK(e.total == e.Delta + e.kinetic);
  CHECK(units::convert_energy(e.Delta, "J", "eV") == doctest::Approx(1.0).epsilon(0.01));
  CHECK(e.M_star == doctest::Approx(5e-27).epsilon(0.01));
  CHECK(transfer_time(1e-6, v) == doctest::Approx(5e-7).epsilon(0.01));
}

TEST_CASE("energetics invariants") {
  const auto p = units::load_preset("paper");
  const auto e0 = kink_energetics(p, 0.0);
  CHECK(e0.kinetic == 0.0);
  CHECK(e0.total == e0.Delta);
  for (double v : {1.0, 10.0, 500.0}) {
    const auto e = kink_energetics(p, v);
    CHECK(e.total - e.kinetic == doctest::Approx(e0.Delta).epsilon(1e-15));
    CHECK(e.M_star > e0.M_star);
  }
  const double v0 = units::derive(p).v0;
  CHECK_THROWS_AS(kink_energetics(p, v0), ValidationError);
  CHECK_THROWS_AS(kink_energetics(p, -1.0), ValidationError);
}

TEST_CASE("transfer time") {
  CHECK(transfer_time(1e-6, 2.0) == 5e-7);
  CHECK(transfer_time(2e-6, 2.0) == 1e-6);
  CHECK(transfer_time(1e-6, 1e3) == doctest::Approx(1e-9));
  CHECK_THROWS_AS(transfer_time(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(transfer_time(1.0, -1.0), ValidationError);
}
