#include <cmath>
#include <complex>

#include "doctest.h"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/spectral.hpp"

using namespace quasilat;

namespace {

const CentralExtensionGroup H = CentralExtensionGroup::heisenberg();
constexpr double kPi = 3.14159265358979323846;

PointPatch theta(double R, double T) { return generate_model_set(CutProjectScheme::silver(R), T); }

double bump2(std::span<const double> q, double r) {
  const double s = (q[0] * q[0] + q[1] * q[1]) / (r * r);
  return s >= 1.0 ? 0.0 : (1.0 - s) * (1.0 - s);
}

}  // namespace

TEST_CASE("geometric_schedule") {
  const auto s = geometric_schedule(100.0);
  REQUIRE(s.size() > 2);
  CHECK(s.back() == 100.0);
  CHECK(s.front() >= 1.0);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}

TEST_CASE("characters") {
  const Character xi{{0.25}};
  const std::vector<double> one{1.0};
  CHECK(std::abs(xi(one) - std::complex<double>(0.0, 1.0)) < 1e-15);
  CHECK(Character{{0.0, 0.0}}.is_trivial());
  CHECK_FALSE(xi.is_trivial());
}

TEST_CASE("twisted density of integer and silver fibers") {
  const PointPatch Z = integer_lattice(1, 100.0);
  const auto s = geometric_schedule(100.0);
  CHECK(std::abs(twisted_density(Z, Character{{0.0}}, s).value - 1.0) <= 1e-2);
  CHECK(std::abs(twisted_density(Z, Character{{0.5}}, s).value) <= 2e-2);
  const DensityEstimate t = twisted_density(theta(1.0, 1e4), Character{{0.0}}, geometric_schedule(1e4));
  CHECK(std::abs(t.value.real() - 0.70710678118654752) <= 0.02 * 0.70710678118654752);
  CHECK(t.converged);
  CHECK(t.partials.size() == geometric_schedule(1e4).size());
}

TEST_CASE("twisted density needs the schedule inside the core") {
  try {
    (void)twisted_density(integer_lattice(1, 10.0), Character{{0.0}}, geometric_schedule(20.0));
    FAIL("expected insufficient-window");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientWindow);
  }
}

TEST_CASE("equivariance residual") {
  const PointPatch L = heisenberg_integer_lattice(3.0, 120.0);
  const std::vector<double> d{0.0, 1.0};
  CHECK(equivariance_residual(L, identity(H), d, Character{{0.3}}, 50.0) == 0.0);

  // Pure central translate: bounded by the boundary layer of the ball.
  const double z0 = 2.5, T = 50.0;
  const double r = equivariance_residual(L, GroupElement{{z0}, {0.0, 0.0}}, d, Character{{0.3}}, T);
  const double layer = (2.0 * z0 + 2.0) / (2.0 * T);
  CHECK(r <= layer);

  for (double th : {0.0, 1.0, 2.0}) {
    const double ri = equivariance_residual(L, GroupElement{{0.0}, {1.0, 0.0}}, d, Character{{th}}, 100.0);
    CHECK(ri <= 2.0 / 100.0);
  }
}

TEST_CASE("palm coefficients") {
  const PointPatch L = heisenberg_integer_lattice(50.0, 100.0);
  CHECK(std::abs(palm_coefficient(L, Character{{0.0}}, 50.0, 100.0) - 1.0) <= 0.02);
  CHECK(palm_coefficient(L, Character{{0.5}}, 50.0, 100.0) <= 2e-2);
  CHECK(std::abs(palm_coefficient(theta(1.0, 2000.0), Character{{0.0}}, 1.0, 2000.0) - 0.5) <= 0.03 * 0.5);
}

TEST_CASE("twisted periodization") {
  const PointPatch Z2 = integer_lattice(2, 3.0);
  const double r = 0.4;
  const TestFunction phi{[r](std::span<const double> q) { return bump2(q, r); }, r};
  const std::complex<double> d1 = twisted_density(integer_lattice(1, 100.0), Character{{0.0}}, 100.0);
  const SplitLattice split{H, Z2, d1};
  const auto at_e = twisted_periodization(split, phi, Character{{0.0}}, identity(H));
  CHECK(std::abs(at_e - d1) < 1e-15);

  const Character xi{{0.37}};
  const GroupElement p{{0.8}, {0.1, -0.2}};
  const double z0 = 1.7;
  const auto base = twisted_periodization(split, phi, xi, p);
  const auto moved = twisted_periodization(split, phi, xi, GroupElement{{0.8 + z0}, {0.1, -0.2}});
  const std::vector<double> zz{z0};
  CHECK(std::abs(moved - std::conj(xi(zz)) * base) < 1e-12);

  // Orbit average of |P φ|² over a fundamental domain of Z² against c·‖φ‖².
  const int n = 200;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const GroupElement g{{0.0}, {(i + 0.5) / n, (j + 0.5) / n}};
      acc += std::norm(twisted_periodization(split, phi, Character{{0.0}}, g));
    }
  acc /= n * n;
  const double norm2 = kPi * r * r / 5.0;
  const double c = palm_coefficient(heisenberg_integer_lattice(10.0, 100.0), Character{{0.0}}, 10.0, 100.0);
  CHECK(acc == doctest::Approx(c * norm2).epsilon(0.05));

  try {
    (void)twisted_periodization(split, phi, xi, GroupElement{{0.0}, {2.9, 0.0}});
    FAIL("expected boundary-unsound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBoundaryUnsound);
  }
}

TEST_CASE("scan axis") {
  const auto a = scan_axis({1.0, 0.25});
  REQUIRE(a.size() == 9);
  CHECK(a.front() == -1.0);
  CHECK(a.back() == 1.0);
  CHECK(a[4] == 0.0);
}

TEST_CASE("epsilon dual") {
  const EpsilonDual z = epsilon_dual(integer_lattice(1, 20.0), 0.1, {3.0, 1e-3});
  REQUIRE_FALSE(z.accepted.empty());
  for (const auto& f : z.accepted) CHECK(std::abs(f.theta[0] - std::round(f.theta[0])) < 2e-3);
  CHECK(z.max_gap == doctest::Approx(1.0).epsilon(3e-3));

  const EpsilonDual t1 = epsilon_dual(theta(1.0, 200.0), 0.5, {10.0, 1e-4});
  CHECK_FALSE(t1.accepted.empty());
  CHECK(t1.max_gap <= 3.0);

  // The wider window of Θ₂ thins its dual: nearest non-trivial clusters sit at ±4.975.
  const EpsilonDual t2 = epsilon_dual(theta(2.0, 200.0), 0.5, {10.0, 1e-4});
  CHECK_FALSE(t2.accepted.empty());
  CHECK(t2.max_gap == doctest::Approx(4.9743).epsilon(1e-3));
  CHECK(t2.max_gap <= t1.max_gap * 2.0);

  const EpsilonDual all = epsilon_dual(theta(1.0, 20.0), 2.0, {1.0, 0.01});
  CHECK(all.accepted.size() == all.grid_points);
}

TEST_CASE("quartic bump and sandwich") {
  double mass = 0.0;
  const double step = 1e-4;
  for (double x = -1.0; x <= 1.0; x += step) mass += quartic_bump(x, 1.0) * step;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(quartic_bump(1.5, 1.0) == 0.0);
  for (double T : {10.0, 20.0, 40.0}) {
    const SandwichResult r = sandwich(integer_lattice(1, 50.0), T, 1.0);
    CHECK(r.lower <= r.integral + 1e-3);
    CHECK(r.integral <= r.upper + 1e-3);
    CHECK(r.violation <= 1e-3);
  }
}
