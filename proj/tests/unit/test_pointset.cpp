#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/pointset.hpp"
#include "quasilat/ring.hpp"

using namespace quasilat;

namespace {

PointPatch line(std::vector<double> xs, double window) {
  PatchBuilder b(CentralExtensionGroup::abelian(1), false);
  for (double x : xs) b.add({}, std::vector<double>{x});
  return std::move(b).build({window, 0.0}, {window, 0.0}, "line");
}

PointPatch theta(double R, double T) { return generate_model_set(CutProjectScheme::silver(R), T); }

}  // namespace

TEST_CASE("builder keeps canonical order and rejects duplicates") {
  PatchBuilder b(CentralExtensionGroup::abelian(1), false);
  CHECK(b.add({}, std::vector<double>{2.0}));
  CHECK(b.add({}, std::vector<double>{-1.0}));
  CHECK(b.add({}, std::vector<double>{1.0}));
  CHECK_FALSE(b.add({}, std::vector<double>{1.0}));
  const PointPatch P = std::move(b).build({2.0, 0.0}, {2.0, 0.0}, "");
  REQUIRE(P.size() == 3);
  CHECK(P.q(0)[0] == 1.0);
  CHECK(P.q(1)[0] == -1.0);
  CHECK(P.q(2)[0] == 2.0);
}

TEST_CASE("points outside the window are rejected") {
  CHECK_THROWS_AS(line({0.0, 3.0}, 2.0), Error);
}

TEST_CASE("minkowski sums") {
  const PointPatch A = line({0.0, 1.0}, 1.0);
  const PointPatch S = minkowski(A, A);
  REQUIRE(S.size() == 3);
  for (double x : {0.0, 1.0, 2.0}) CHECK(test::has_point(S, std::vector<double>{x}));

  const PointPatch P = theta(1.0, 10.0);
  const PointPatch E = line({0.0}, 0.0);
  const PointPatch PE = minkowski(P, E);
  CHECK(PE.size() == P.size());
  CHECK(PE.core().q <= P.core().q);
}

TEST_CASE("silver differences lie in the doubled window") {
  const PointPatch P = theta(1.0, 3.0);
  const PointPatch D = minkowski(P, inverse_set(P));
  const PointPatch W = theta(2.0, 6.0);
  REQUIRE(D.has_exact());
  for (std::size_t i = 0; i < D.size(); ++i) {
    CHECK(star_within(D.exact(i)[0], 2.0));
    CHECK(W.find(D.coords(i), D.exact(i)).has_value());
  }
}

TEST_CASE("inverse_set") {
  const PointPatch P = theta(1.0, 20.0);
  const PointPatch I = inverse_set(P);
  CHECK(I.size() == P.size());
  for (std::size_t i = 0; i < P.size(); ++i) CHECK(test::has_point(I, P, i));

  PatchBuilder b(CentralExtensionGroup::heisenberg(), false);
  b.add(GroupElement{{3}, {1, 2}});
  const PointPatch one = std::move(b).build({3, 3}, {3, 3}, "");
  const PointPatch inv1 = inverse_set(one);
  REQUIRE(inv1.size() == 1);
  CHECK(inv1.element(0) == GroupElement{{-3}, {-1, -2}});

  const PointPatch J = line({0.3, 1.7, -2.2}, 3.0);
  const PointPatch JJ = inverse_set(inverse_set(J));
  for (std::size_t i = 0; i < J.size(); ++i) CHECK(test::has_point(JJ, J, i));
}

TEST_CASE("min_gap") {
  CHECK(min_gap(integer_lattice(1, 10.0)) == doctest::Approx(1.0));
  CHECK(min_gap(theta(1.0, 3.0)) == doctest::Approx(1.0));
  CHECK(min_gap(line({0.0, 1e-6}, 1.0)) == doctest::Approx(1e-6));
  CHECK(std::isinf(min_gap(line({0.5}, 1.0))));
}

TEST_CASE("min_gap agrees with brute force in the Heisenberg group") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  const auto H = CentralExtensionGroup::heisenberg();
  PatchBuilder b(H, false);
  std::vector<GroupElement> pts;
  for (int i = 0; i < 300; ++i) {
    GroupElement g{{u(rng) * 3}, {u(rng), u(rng)}};
    if (b.add(g)) pts.push_back(g);
  }
  const PointPatch P = std::move(b).build({3, 9}, {3, 9}, "");
  double brute = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) brute = std::min(brute, distance(H, pts[i], pts[j]));
  CHECK(min_gap(P) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("covering_radius") {
  const CoveringEstimate z = covering_radius(integer_lattice(1, 100.0), {50.0, 0.0}, 0.01);
  CHECK(z.value == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(z.value - 0.5) <= 0.01);
  const CoveringEstimate t = covering_radius(theta(1.0, 100.0), {50.0, 0.0}, 0.01);
  CHECK(t.value <= 2.5);
  CHECK(t.grid_max <= t.value);
  PatchBuilder b(CentralExtensionGroup::abelian(1), false);
  const PointPatch empty = std::move(b).build({1.0, 0.0}, {1.0, 0.0}, "");
  CHECK_THROWS_AS(covering_radius(empty, {1.0, 0.0}, 0.1), Error);
  try {
    (void)covering_radius(integer_lattice(1, 10.0), {20.0, 0.0}, 0.1);
    FAIL("expected boundary-unsound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBoundaryUnsound);
  }
}

TEST_CASE("check_meyerian") {
  const MeyerReport t = check_meyerian(theta(1.0, 50.0), 3, 0.1);
  CHECK(t.pass);
  REQUIRE(t.levels.size() == 3);
  for (const auto& l : t.levels) CHECK(l.min_gap >= 0.1);

  const MeyerReport z = check_meyerian(integer_lattice(1, 200.0), 5, 0.1);
  CHECK(z.pass);
  for (const auto& l : z.levels) CHECK(l.min_gap == doctest::Approx(1.0));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(u(rng));
  const MeyerReport r = check_meyerian(line(xs, 1.0), 3, 0.1);
  CHECK_FALSE(r.pass);
  REQUIRE(r.levels.size() == 1);
  CHECK(r.levels[0].k == 1);
}

TEST_CASE("check_meyerian reports an insufficient window") {
  try {
    (void)check_meyerian(line({0.0}, 0.5), 2, 0.1);
    FAIL("expected insufficient-window");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientWindow);
  }
}

TEST_CASE("approximate_group_cover") {
  const CoverReport z = approximate_group_cover(integer_lattice(1, 20.0));
  REQUIRE(z.translators.size() == 1);
  CHECK(z.translators[0].q[0] == 0.0);

  const CoverReport t50 = approximate_group_cover(theta(1.0, 50.0));
  const CoverReport t100 = approximate_group_cover(theta(1.0, 100.0));
  CHECK(t50.translators.size() <= 40);
  CHECK(t100.translators.size() == t50.translators.size());

  const CoverReport h = approximate_group_cover(heisenberg_integer_lattice(3.0, 9.0));
  REQUIRE(h.translators.size() == 1);
  CHECK(gauge(CentralExtensionGroup::heisenberg(), h.translators[0]) == 0.0);
}

TEST_CASE("translate and crop") {
  const PointPatch Z = integer_lattice(1, 10.0);
  const PointPatch T = translate(GroupElement{{}, {0.5}}, Z);
  CHECK(test::has_point(T, std::vector<double>{10.5}));
  CHECK(T.core().q == doctest::Approx(9.5));
  const PointPatch C = crop(Z, {3.0, 0.0});
  CHECK(C.size() == 7);
}

TEST_CASE("symmetry and identity predicates") {
  CHECK(is_symmetric(theta(1.0, 30.0)));
  CHECK(contains_identity(theta(1.0, 30.0)));
  CHECK_FALSE(is_symmetric(line({0.0, 1.0}, 1.0)));
  CHECK_FALSE(contains_identity(line({0.5, 1.0}, 1.0)));
}
