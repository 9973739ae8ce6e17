#include <cmath>

#include "doctest.h"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/pisot.hpp"

using namespace quasilat;

namespace {

PointPatch theta(double R, double T) { return generate_model_set(CutProjectScheme::silver(R), T); }

const IntPolynomial kLehmer{{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}};

}  // namespace

TEST_CASE("minimal polynomials of quadratic integers") {
  CHECK(min_poly_quadratic(QuadInt{1, 1, 2}) == IntPolynomial{{-1, -2, 1}});
  CHECK(min_poly_quadratic(QuadInt{3, 0, 2}) == IntPolynomial{{-3, 1}});
  CHECK(min_poly_quadratic(QuadInt{3, 2, 2}) == IntPolynomial{{1, -6, 1}});
  CHECK(to_string(IntPolynomial{{-1, -2, 1}}) == "X^2 - 2X - 1");
}

TEST_CASE("roots of monic polynomials") {
  const auto r = polynomial_roots(IntPolynomial{{-1, -2, 1}});
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r[1].real() == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(polynomial_roots(IntPolynomial{{1, 2}}), Error);
}

TEST_CASE("Pisot and Salem classification") {
  const auto s = classify_pisot_salem(IntPolynomial{{-1, -2, 1}}, 1.0 + std::sqrt(2.0));
  CHECK(s.kind == SpectrumKind::kPisot);
  REQUIRE(s.conjugate_moduli.size() == 1);
  CHECK(std::abs(s.conjugate_moduli[0] - 0.41421356237309505) <= 1e-8);

  CHECK(classify_pisot_salem(IntPolynomial{{-1, -1, 1}}, 1.618).kind == SpectrumKind::kPisot);

  const auto l = classify_pisot_salem(kLehmer, 1.17628);
  CHECK(l.kind == SpectrumKind::kSalem);
  int on_circle = 0;
  for (double m : l.conjugate_moduli) on_circle += std::abs(m - 1.0) <= 1e-8;
  CHECK(on_circle == 8);
  CHECK_FALSE(l.warnings.empty());

  CHECK(classify_pisot_salem(IntPolynomial{{-2, 0, 1}}, std::sqrt(2.0)).kind == SpectrumKind::kNeither);
  try {
    (void)classify_pisot_salem(IntPolynomial{{-1, -2, 1}}, 2.0);
    FAIL("expected not-a-root");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotARoot);
  }
  try {
    (void)classify_pisot_salem(IntPolynomial{{-1, -2, 2}}, 1.2);
    FAIL("expected non-monic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonMonic);
  }
}

TEST_CASE("dilation invariance of silver patches") {
  const PointPatch P = theta(1.0, 50.0);
  const DilationReport ok = dilation_invariance(P, QuadInt{1, 1, 2}, DilationMode::kAbelian);
  CHECK(ok.holds);
  CHECK(ok.checked > 0);
  const DilationReport two = dilation_invariance(P, QuadInt::integer(2), DilationMode::kAbelian);
  CHECK_FALSE(two.holds);
  REQUIRE(two.witness.has_value());
  CHECK(two.witness->q[0] == QuadInt::integer(1));
}

TEST_CASE("stratified dilation of the Heisenberg symplectic product") {
  const auto sp = symplectic_product(theta(1.0, 300.0), generate_model_set(CutProjectScheme::silver(1.0, 2), 3.0),
                                     CentralExtensionGroup::heisenberg(), 4);
  const DilationReport r = dilation_invariance(sp.patch, QuadInt{1, 1, 2}, DilationMode::kStratified2);
  CHECK(r.holds);
  CHECK(r.tested_core.z == doctest::Approx(sp.patch.core().z / (3.0 + 2.0 * std::sqrt(2.0))));
  CHECK_THROWS_AS(dilation_invariance(sp.patch, QuadInt{1, 1, 2}, DilationMode::kAbelian), Error);
}

TEST_CASE("characteristic polynomial") {
  const auto p = characteristic_polynomial(Matrix::square(2, {2, 1, 1, 0}));
  REQUIRE(p.size() == 3);
  CHECK(p[0] == doctest::Approx(-1.0));
  CHECK(p[1] == doctest::Approx(-2.0));
  CHECK(p[2] == doctest::Approx(1.0));
}

TEST_CASE("tower spectrum of diagonal blocks") {
  const TowerReport r = tower_spectrum_check({Matrix::square(2, {2, 0, 0, 3}), Matrix::square(1, {6})}, 1);
  CHECK(r.factored);
  REQUIRE(r.spectrum.size() == 3);
  CHECK(r.spectrum[0].real() == doctest::Approx(6.0));
  CHECK(r.spectrum[1].real() == doctest::Approx(3.0));
  CHECK(r.spectrum[2].real() == doctest::Approx(2.0));
  // (X−2)(X−3)(X−6) = X³ − 11X² + 36X − 36
  const std::vector<double> want{-36, 36, -11, 1};
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.char_poly[i] == doctest::Approx(want[i]).epsilon(1e-9));

  const TowerReport id = tower_spectrum_check({Matrix::square(1, {1}), Matrix::square(1, {1})}, 2);
  CHECK(id.factored);
  REQUIRE(id.spectrum.size() == 2);
  CHECK(id.spectrum[0].real() == doctest::Approx(1.0));
  CHECK_FALSE(id.simple_spectrum);
}

TEST_CASE("tower of silver blocks is Pisot") {
  const double t2 = 3.0 + 2.0 * std::sqrt(2.0);
  const TowerReport r = tower_spectrum_check({Matrix::square(2, {0, 1, 1, 2}), Matrix::square(1, {t2})}, 3);
  CHECK(r.factored);
  std::size_t classified = 0;
  for (const auto& e : r.eigen) {
    if (std::abs(e.value) > 1.0 && std::abs(e.value.imag()) < 1e-9) {
      REQUIRE(e.classification.has_value());
      CHECK(e.classification->kind == SpectrumKind::kPisot);
      ++classified;
    }
  }
  CHECK(classified == 2);
  // The companion block carries both 1+√2 and 1−√2.
  CHECK(r.galois == GaloisCheck::kFails);

  const TowerReport ok = tower_spectrum_check({Matrix::square(1, {2.0}), Matrix::square(1, {t2})}, 3);
  CHECK(ok.galois == GaloisCheck::kHolds);
  CHECK(tower_spectrum_check({Matrix::square(1, {std::cbrt(2.0)})}, 3).galois == GaloisCheck::kUnchecked);
}

TEST_CASE("recognize_quadratic") {
  const auto p = recognize_quadratic(1.0 + std::sqrt(2.0));
  REQUIRE(p.has_value());
  CHECK(*p == IntPolynomial{{-1, -2, 1}});
  const auto q = recognize_quadratic(4.0);
  REQUIRE(q.has_value());
  CHECK(*q == IntPolynomial{{-4, 1}});
  CHECK_FALSE(recognize_quadratic(std::cbrt(2.0)).has_value());
}
