#include <doctest.h>

#include <cmath>
#include <random>

#include "mtkink/cubic_roots.hpp"
#include "support/oracles.hpp"

using namespace mtkink;
using namespace mtkink::cubic;

TEST_CASE("critical forcing") {
  const double sc = critical_sigma();
  CHECK(sc == doctest::Approx(0.3849001794597505).epsilon(1e-15));
  // double root at the turning points
  const double tp = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(force_cubic(-tp, sc)) < 1e-15);
  CHECK(std::abs(3 * tp * tp - 1.0) < 1e-15);
  CHECK(std::abs(force_cubic(tp, -sc)) < 1e-15);
}

TEST_CASE("unforced roots") {
  const auto r = solve_force_cubic(0.0);
  CHECK(r.a == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(r.d) < 1e-15);
  CHECK(r.b == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sigma = 0.3 against the bisection oracle") {
  // 200-step bisection at 30 digits.
  const auto r = solve_force_cubic(0.3);
  CHECK(r.a == doctest::Approx(-0.786482541161627).epsilon(1e-13));
  CHECK(r.d == doctest::Approx(-0.338936241594999).epsilon(1e-13));
  CHECK(r.b == doctest::Approx(1.125418782756626).epsilon(1e-13));
  CHECK(r.a * r.b * r.d == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("regime lost beyond the critical forcing") {
  try {
    solve_force_cubic(0.5);
    FAIL("expected KinkRegimeLost");
  } catch (const KinkRegimeLost& e) {
    CHECK(e.sigma() == 0.5);
    CHECK(std::abs(force_cubic(e.lone_root(), 0.5)) < 1e-12);
    CHECK(e.lone_root() > 1.0);
    CHECK(std::string(e.what()).find("kink regime lost") != std::string::npos);
  }
  CHECK_THROWS_AS(solve_force_cubic(-0.5), KinkRegimeLost);
  CHECK_THROWS_AS(solve_force_cubic(critical_sigma()), KinkRegimeLost);
  CHECK_THROWS_AS(solve_force_cubic(critical_sigma() - 0.5 * critical_margin), KinkRegimeLost);
  CHECK_NOTHROW(solve_force_cubic(critical_sigma() - 2.0 * critical_margin));
  CHECK_THROWS_AS(solve_force_cubic(NAN), ValidationError);
}

TEST_CASE("lone root for large forcing grows like the cube root") {
  for (double s : {1.0, 10.0, 1e3, -1e6}) {
    const double r = dominant_root(s);
    CHECK(std::abs(force_cubic(r, s)) < 1e-9 * std::max(1.0, std::abs(s)));
  }
  CHECK(dominant_root(1e6) == doctest::Approx(std::cbrt(1e6)).epsilon(1e-3));
}

TEST_CASE("Vieta identities over random forcing") {
  std::mt19937_64 rng(2024);
  const double sc = critical_sigma();
  std::uniform_real_distribution<double> dist(-sc + 2e-9, sc - 2e-9);
  for (int i = 0; i < 10000; ++i) {
    const double s = dist(rng);
    const auto r = solve_force_cubic(s);
    REQUIRE(r.a <= r.d);
    REQUIRE(r.d <= r.b);
    REQUIRE(std::abs(r.a + r.b + r.d) < 1e-10);
    REQUIRE(std::abs(r.a * r.b + r.a * r.d + r.b * r.d + 1.0) < 1e-10);
    REQUIRE(std::abs(r.a * r.b * r.d - s) < 1e-10);
    if (s > 0) REQUIRE(r.d < 0.0);
  }
}

TEST_CASE("agreement with the bisection oracle") {
  std::mt19937_64 rng(99);
  const double sc = critical_sigma();
  // Keep away from the double root, where bisection itself loses digits.
  std::uniform_real_distribution<double> dist(-0.98 * sc, 0.98 * sc);
  for (int i = 0; i < 2000; ++i) {
    const double s = dist(rng);
    const auto r = solve_force_cubic(s);
    const auto o = oracle::cubic_roots(s);
    REQUIRE(std::abs(r.a - o.a) < 1e-12);
    REQUIRE(std::abs(r.d - o.d) < 1e-12);
    REQUIRE(std::abs(r.b - o.b) < 1e-12);
  }
}

TEST_CASE("odd symmetry and continuity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 0.38);
  for (int i = 0; i < 1000; ++i) {
    const double s = dist(rng);
    const auto p = solve_force_cubic(s);
    const auto m = solve_force_cubic(-s);
    REQUIRE(m.a == -p.b);
    REQUIRE(m.d == -p.d);
    REQUIRE(m.b == -p.a);
  }
  // |dd/dsigma| = 1/(1 - 3d^2) grows monotonically away from sigma = 0, so
  // the larger endpoint slope bounds each step
  auto slope = [](double d) { return 1.0 / (1.0 - 3.0 * d * d); };
  double prev_d = solve_force_cubic(-0.38).d;
  for (int i = -379; i <= 380; ++i) {
    const double d = solve_force_cubic(i * 1e-3).d;
    CHECK(std::abs(d - prev_d) <= 1e-3 * std::max(slope(d), slope(prev_d)) + 1e-15);
    prev_d = d;
  }
}

TEST_CASE("roots from parameters") {
  units::PhysicalParams p = units::load_preset("paper");
  p.E_field = 0.0;
  auto r = roots_from_params(p);
  CHECK(r.a == doctest::Approx(-1.0));
  CHECK(r.b == doctest::Approx(1.0));

  const auto paper = units::load_preset("paper");
  r = roots_from_params(paper);
  CHECK(r.sigma == doctest::Approx(3e-3).epsilon(1e-4));
  CHECK(std::abs(r.d) < 0.01);
  CHECK(r.sigma < 0.1 * critical_sigma());

  // 100x field: still three real roots, sigma = 0.3
  const auto strong = roots_from_params(units::load_preset("strong-field"));
  CHECK(strong.sigma == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(strong.d == doctest::Approx(-0.338936).epsilon(1e-3));
}
