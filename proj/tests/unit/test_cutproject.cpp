#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/ring.hpp"

using namespace quasilat;

namespace {

const CentralExtensionGroup H = CentralExtensionGroup::heisenberg();

PointPatch theta(double R, double T) { return generate_model_set(CutProjectScheme::silver(R), T); }
PointPatch theta2(double R, double T) { return generate_model_set(CutProjectScheme::silver(R, 2), T); }

SymplecticProduct silver_product() { return symplectic_product(theta(1.0, 150.0), theta2(1.0, 2.0), H, 4); }

}  // namespace

TEST_CASE("silver scheme matches the ring construction") {
  const PointPatch P = theta(1.0, 3.0);
  const PointPatch Q = model_set_1d(1.0, 3.0);
  REQUIRE(P.size() == Q.size());
  for (std::size_t i = 0; i < P.size(); ++i) CHECK(P.exact(i)[0] == Q.exact(i)[0]);
}

TEST_CASE("periodic matrix scheme") {
  const auto s = CutProjectScheme::matrix(1, 1, {1.0, 0.0, 0.0, 1.0}, {{-0.5, 0.5}});
  const PointPatch P = generate_model_set(s, 3.0);
  REQUIRE(P.size() == 7);
  for (int n = -3; n <= 3; ++n) CHECK(test::has_point(P, std::vector<double>{static_cast<double>(n)}));
}

TEST_CASE("matrix scheme with an irrational basis reproduces the silver set") {
  const double r = std::sqrt(2.0);
  const auto s = CutProjectScheme::matrix(1, 1, {1.0, r, 1.0, -r}, {{-1.0, 1.0}});
  const PointPatch P = generate_model_set(s, 50.0);
  const PointPatch Q = theta(1.0, 50.0);
  REQUIRE(P.size() == Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) CHECK(test::has_point(P, Q, i));
}

TEST_CASE("silver density for a wide window") {
  const double T = 1e4;
  const PointPatch P = theta(5.0, T);
  const double density = static_cast<double>(P.size()) / (2 * T);
  CHECK(std::abs(density - 5.0 / std::sqrt(2.0)) <= 0.01 * 5.0 / std::sqrt(2.0));
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(CutProjectScheme::matrix(1, 1, {1, 2, 2, 4}, {{-1, 1}}).validate(), Error);
  try {
    CutProjectScheme::matrix(1, 1, {1, 0, 0, 1}, {{1, 1}}).validate();
    FAIL("expected degenerate-window");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateWindow);
  }
  CHECK_THROWS_AS(CutProjectScheme::silver(1.0, 1, 4).validate(), Error);
}

TEST_CASE("silver symplectic product") {
  const auto sp = symplectic_product(theta(1.0, 300.0), theta2(1.0, 3.0), H, 4);
  CHECK(sp.condition_holds);
  const PointPatch& P = sp.patch;
  REQUIRE(P.has_exact());
  CHECK(P.size() == theta(1.0, 300.0).size() * theta2(1.0, 3.0).size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto e = P.exact(i);
    CHECK(star_within(e[0], 1.0));
    CHECK(star_within(e[1], 1.0));
    CHECK(star_within(e[2], 1.0));
  }
}

TEST_CASE("integer symplectic product is the integer Heisenberg lattice") {
  const auto sp = symplectic_product(integer_lattice(1, 40.0), integer_lattice(2, 3.0), H, 1);
  CHECK(sp.condition_holds);
  const PointPatch L = heisenberg_integer_lattice(3.0, 40.0);
  REQUIRE(sp.patch.size() == L.size());
  for (std::size_t i = 0; i < L.size(); ++i) CHECK(test::has_point(sp.patch, L, i));
}

TEST_CASE("symplectic condition fails for a degenerate centre") {
  PatchBuilder b(CentralExtensionGroup::abelian(1), true);
  b.add({}, std::vector<double>{0.0}, std::vector<QuadInt>{QuadInt::integer(0)});
  const PointPatch zero = std::move(b).build({40.0, 0.0}, {40.0, 0.0}, "{0}");
  const auto sp = symplectic_product(zero, integer_lattice(2, 2.0), H, 1);
  CHECK_FALSE(sp.condition_holds);
}

TEST_CASE("project") {
  const auto sp = silver_product();
  const PointPatch D = project(sp.patch);
  const PointPatch want = theta2(1.0, 2.0);
  CHECK(D.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(test::has_point(D, want, i));

  PatchBuilder b(H, false);
  b.add(GroupElement{{1.5}, {0.25, -2}});
  const PointPatch one = project(std::move(b).build({2, 2}, {2, 2}, ""));
  REQUIRE(one.size() == 1);
  CHECK(one.q(0)[0] == 0.25);
  CHECK(one.q(0)[1] == -2.0);

  CHECK(min_gap(project(heisenberg_integer_lattice(3.0, 5.0))) == doctest::Approx(1.0));
}

TEST_CASE("fiber") {
  const PointPatch L = heisenberg_integer_lattice(3.0, 12.0);
  const PointPatch F = fiber(L, std::vector<double>{0.0, 0.0});
  CHECK(F.size() == 25);
  for (int z = -12; z <= 12; ++z) CHECK(test::has_point(F, std::vector<double>{static_cast<double>(z)}));

  const auto sp = silver_product();
  const PointPatch xi = theta(1.0, 150.0);
  for (std::size_t c = 0; c < project(sp.patch).size(); ++c) {
    const PointPatch Fc = fiber(sp.patch, project(sp.patch).q(c));
    CHECK(Fc.size() == xi.size());
  }
  CHECK(fiber(L, std::vector<double>{0.5, 0.0}).empty());
}

TEST_CASE("alignment_report") {
  const auto sp = silver_product();
  AlignmentOptions opts;
  opts.z_region = 40.0;
  const AlignmentReport full = alignment_report(sp.patch, 2.0, opts);
  CHECK(full.uniformly_large);
  CHECK(full.essential_fraction == 1.0);

  const std::vector<double> d0{1.0, 0.0};
  const PointPatch holed = replace_fiber(sp.patch, d0, {{0.0}});
  const AlignmentReport r = alignment_report(holed, 2.0, opts);
  CHECK_FALSE(r.uniformly_large);
  for (const auto& f : r.fibers) {
    if (f.delta == d0) CHECK_FALSE(f.essential);
  }

  const AlignmentReport L = alignment_report(heisenberg_integer_lattice(3.0, 10.0), 1.0);
  CHECK(L.projection_min_gap == doctest::Approx(1.0));
  CHECK(L.uniformly_large);
}

TEST_CASE("enforce_uniform_fibers drops the sparse columns of P squared") {
  const PointPatch L = heisenberg_integer_lattice(3.0, 20.0);
  const double s0 = std::sqrt(2.0) / 4.0;
  const std::vector<double> d0{s0, 0.0};
  const PointPatch P = replace_fiber(replace_fiber(L, d0, {{0.0}}), std::vector<double>{-s0, 0.0}, {{0.0}});
  AlignmentOptions opts;
  opts.z_region = 5.0;
  CHECK_FALSE(alignment_report(P, 1.0, opts).uniformly_large);
  const PointPatch E = enforce_uniform_fibers(P, 1.0, opts);
  // 3δ₀ is not a lattice point, so 2δ₀ is reached only as δ₀ + δ₀.
  CHECK(fiber(E, std::vector<double>{2.0 * s0, 0.0}).empty());
  CHECK(fiber(E, std::vector<double>{-2.0 * s0, 0.0}).empty());
  CHECK_FALSE(fiber(E, d0).empty());
  CHECK(alignment_report(E, 1.0, opts).uniformly_large);
}

TEST_CASE("enforce_uniform_fibers keeps a uniform lattice") {
  const PointPatch L = heisenberg_integer_lattice(3.0, 20.0);
  AlignmentOptions opts;
  opts.z_region = 5.0;
  const PointPatch E = enforce_uniform_fibers(L, 1.0, opts);
  const PointPatch core = crop(L, E.core());
  for (std::size_t i = 0; i < core.size(); ++i) CHECK(test::has_point(E, core, i));
  try {
    (void)enforce_uniform_fibers(L, 0.1, opts);
    FAIL("expected threshold-too-small");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kThresholdTooSmall);
  }
}

TEST_CASE("fiber_cardinality_profile") {
  const auto small = fiber_cardinality_profile(heisenberg_integer_lattice(2.0, 10.0), 2);
  const auto large = fiber_cardinality_profile(heisenberg_integer_lattice(2.0, 20.0), 2);
  REQUIRE(small.size() == 2);
  REQUIRE(large.size() == 2);
  const double ratio = static_cast<double>(large[1].max_cardinality) / static_cast<double>(small[1].max_cardinality);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));

  // A lattice of irrational slope in R ⊕ R: the projection is injective.
  const CentralExtensionGroup G(Cocycle::zero(1, 1));
  PatchBuilder b(G, false);
  for (int a = -6; a <= 6; ++a)
    for (int c = -6; c <= 6; ++c) b.add(GroupElement{{a + c * std::sqrt(2.0)}, {a - c * std::sqrt(3.0)}});
  const PointPatch slope = std::move(b).build({20, 20}, {20, 20}, "slope");
  for (const auto& row : fiber_cardinality_profile(slope, 3)) CHECK(row.max_cardinality == 1);

  PatchBuilder s(H, false);
  s.add(GroupElement{{0}, {0, 0}});
  const PointPatch one = std::move(s).build({1, 1}, {1, 1}, "");
  for (const auto& row : fiber_cardinality_profile(one, 3)) CHECK(row.max_cardinality == 1);
}
