#include <cmath>

#include "doctest.h"
#include "quasilat/cutproject.hpp"
#include "quasilat/diffraction.hpp"
#include "quasilat/error.hpp"
#include "quasilat/ring.hpp"
#include "quasilat/spectral.hpp"

using namespace quasilat;

namespace {

const CentralExtensionGroup H = CentralExtensionGroup::heisenberg();

PointPatch theta(double R, double T) { return generate_model_set(CutProjectScheme::silver(R), T); }

double bump1(double x, double r) {
  const double s = x * x / (r * r);
  return s >= 1.0 ? 0.0 : (1.0 - s) * (1.0 - s);
}

double weight_at(const WeightedPointMeasure& eta, double z) {
  for (const auto& a : eta.atoms)
    if (std::abs(a.z.empty() ? a.q[0] - z : a.z[0] - z) < 1e-9) return a.weight;
  return 0.0;
}

}  // namespace

TEST_CASE("autocorrelation of Z") {
  const WeightedPointMeasure eta = autocorrelation(integer_lattice(1, 60.0), 50.0, 5.0);
  CHECK(eta.atoms.size() == 11);
  for (int k = -5; k <= 5; ++k) CHECK(std::abs(weight_at(eta, k) - 1.0) <= 0.05);
}

TEST_CASE("autocorrelation of the silver set at 0 is its density") {
  const WeightedPointMeasure eta = autocorrelation(theta(1.0, 1e4 + 3.0), 1e4, 3.0);
  CHECK(std::abs(weight_at(eta, 0.0) - 0.70710678118654752) <= 0.02 * 0.70710678118654752);
  for (const auto& a : eta.atoms) CHECK(weight_at(eta, -a.q[0]) == doctest::Approx(a.weight));
}

TEST_CASE("autocorrelation of a singleton") {
  PatchBuilder b(CentralExtensionGroup::abelian(1), false);
  b.add({}, std::vector<double>{0.0});
  const PointPatch one = std::move(b).build({10.0, 0.0}, {10.0, 0.0}, "");
  const WeightedPointMeasure eta = autocorrelation(one, 2.0, 1.0);
  REQUIRE(eta.atoms.size() == 1);
  CHECK(eta.atoms[0].weight == doctest::Approx(0.25));
}

TEST_CASE("autocorrelation needs room around the averaging ball") {
  try {
    (void)autocorrelation(integer_lattice(1, 10.0), 8.0, 5.0);
    FAIL("expected insufficient-window");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientWindow);
  }
}

TEST_CASE("central autocorrelation") {
  const WeightedPointMeasure z = autocorrelation(integer_lattice(1, 30.0), 20.0, 5.0);
  const WeightedPointMeasure ze = central_autocorrelation(z);
  CHECK(ze.atoms.size() == z.atoms.size());

  const WeightedPointMeasure h = central_autocorrelation(autocorrelation(heisenberg_integer_lattice(9.0, 81.0), 4.0, 5.0));
  for (int k = -5; k <= 5; ++k) CHECK(std::abs(weight_at(h, k) - 1.0) <= 0.05);
  for (const auto& a : h.atoms) CHECK(a.z[0] == std::round(a.z[0]));

  const auto sp = symplectic_product(theta(1.0, 300.0), generate_model_set(CutProjectScheme::silver(1.0, 2), 9.0), H, 4,
                                     {false});
  const WeightedPointMeasure s = central_autocorrelation(autocorrelation(sp.patch, 3.0, 3.0));
  REQUIRE_FALSE(s.atoms.empty());
  for (const auto& a : s.atoms) {
    REQUIRE(a.exact.size() == 1);
    CHECK(star_within(a.exact[0], 2.0));
  }
}

TEST_CASE("diffraction atoms") {
  const WeightedPointMeasure z = central_autocorrelation(autocorrelation(integer_lattice(1, 200.0), 100.0, 100.0));
  CHECK(std::abs(diffraction_atom(z, Character{{0.0}}, 100.0) - 1.0) <= 0.05);
  CHECK(std::abs(diffraction_atom(z, Character{{0.5}}, 100.0)) <= 0.05);

  const PointPatch T1 = theta(1.0, 1e4 + 500.0);
  const WeightedPointMeasure t = central_autocorrelation(autocorrelation(T1, 1e4, 500.0));
  const double atom = diffraction_atom(t, Character{{0.0}}, 500.0);
  const double palm = palm_coefficient(T1, Character{{0.0}}, 1.0, 1e4);
  CHECK(std::abs(atom - 0.5) <= 0.05 * 0.5);
  CHECK(std::abs(atom - palm) <= 0.05 * 0.5);
  CHECK_THROWS_AS(diffraction_atom(t, Character{{0.0}}, 600.0), Error);
}

TEST_CASE("eta quadratic form of a point mass") {
  const WeightedPointMeasure z = central_autocorrelation(autocorrelation(integer_lattice(1, 30.0), 20.0, 5.0));
  const std::vector<std::pair<std::vector<double>, std::complex<double>>> psi{{{0.0}, {1.0, 0.0}}};
  CHECK(std::abs(eta_quadratic_form(z, psi) - weight_at(z, 0.0)) < 1e-12);
}

TEST_CASE("bragg scan of Z") {
  const BraggResult r = bragg_scan(integer_lattice(1, 110.0), 0.1, {5.0, 1e-3}, 1.0, 100.0);
  REQUIRE(r.peaks.size() == 11);
  for (const auto& p : r.peaks) CHECK(std::abs(p.theta[0] - std::round(p.theta[0])) <= 1e-3);
  CHECK(r.max_gap == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.dual_checked);
  CHECK(r.dual_missing.empty());
}

TEST_CASE("bragg scan of the silver set") {
  const BraggResult r = bragg_scan(theta(1.0, 400.0), 0.5, {10.0, 1e-3}, 1.0, 400.0);
  CHECK_FALSE(r.peaks.empty());
  CHECK(r.max_gap <= 4.0);
  CHECK(r.dual_missing.empty());
}

TEST_CASE("bragg scan of the integer Heisenberg lattice") {
  const BraggResult r = bragg_scan(heisenberg_integer_lattice(10.0, 200.0), 0.1, {2.0, 0.01}, 10.0, 200.0);
  REQUIRE(r.peaks.size() == 5);
  for (const auto& p : r.peaks) {
    CHECK(std::abs(p.theta[0] - std::round(p.theta[0])) <= 0.01);
    CHECK(std::abs(p.c_xi - r.c_1) <= 0.02 * r.c_1);
  }
}

TEST_CASE("bragg scan rejects a vanishing density") {
  PatchBuilder b(H, false);
  b.add(GroupElement{{0}, {2.5, 0}});
  const PointPatch one = std::move(b).build({3, 300}, {3, 300}, "");
  try {
    (void)bragg_scan(one, 0.1, {1.0, 0.1}, 1.0, 200.0);
    FAIL("expected degenerate-density");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateDensity);
  }
}

TEST_CASE("projection consistency") {
  const SplitData split{H, as_central(integer_lattice(1, 120.0)), integer_lattice(2, 3.0)};
  const TestFunction psi{[](std::span<const double> z) { return bump1(z[0], 0.2); }, 0.2};
  const TestFunction phi{[](std::span<const double> q) { return bump1(std::hypot(q[0], q[1]), 0.4); }, 0.4};
  const ConsistencyResult r = projection_consistency(split, psi, phi, Character{{0.0}}, 100.0, 1e-2);
  CHECK(r.residual <= 2e-2);
  CHECK(r.warning.empty());

  const ConsistencyResult h = projection_consistency(split, psi, phi, Character{{0.5}}, 100.0, 1e-2);
  CHECK(std::abs(h.lhs) <= 2e-2);
  CHECK(std::abs(h.rhs) <= 2e-2);

  const TestFunction zero{[](std::span<const double>) { return 0.0; }, 0.4};
  const ConsistencyResult z = projection_consistency(split, psi, zero, Character{{0.0}}, 100.0, 1e-2);
  CHECK(z.lhs == std::complex<double>(0.0, 0.0));
  CHECK(z.rhs == std::complex<double>(0.0, 0.0));

  const ConsistencyResult w = projection_consistency(split, psi, phi, Character{{0.0}}, 100.0, 0.05);
  CHECK_FALSE(w.warning.empty());
}
