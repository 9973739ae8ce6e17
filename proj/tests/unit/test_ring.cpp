#include <cmath>
#include <random>

#include "doctest.h"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/ring.hpp"

using namespace quasilat;

TEST_CASE("quad_mul expands products in Z[sqrt 2]") {
  CHECK(QuadInt{1, 1, 2} * QuadInt{1, 1, 2} == QuadInt{3, 2, 2});
  CHECK(QuadInt{1, 0, 2} * QuadInt{7, -4, 2} == QuadInt{7, -4, 2});
  CHECK(QuadInt{1, 1, 2} * QuadInt{1, -1, 2} == QuadInt{-1, 0, 2});
}

TEST_CASE("quad arithmetic rejects mixed radicands and overflow") {
  CHECK_THROWS_AS((void)(QuadInt{1, 1, 2} + QuadInt{1, 1, 3}), Error);
  try {
    (void)(QuadInt{1, 1, 2} * QuadInt{1, 1, 5});
    FAIL("expected radicand-mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kRadicandMismatch);
  }
  const QuadInt big{std::int64_t{1} << 40, 0, 2};
  try {
    (void)(big * big);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOverflow);
  }
}

TEST_CASE("star is Galois conjugation") {
  CHECK(star(QuadInt{1, 1, 2}) == QuadInt{1, -1, 2});
  CHECK(star(QuadInt{0, 0, 2}) == QuadInt{0, 0, 2});
  CHECK(star(QuadInt{3, 2, 2}) == QuadInt{3, -2, 2});
  CHECK(star(QuadInt{3, 2, 2}).embed() == doctest::Approx(0.17157287525).epsilon(1e-10));
}

TEST_CASE("star is a ring automorphism") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> c(-1000, 1000);
  for (int i = 0; i < 500; ++i) {
    const QuadInt x{c(rng), c(rng), 2}, y{c(rng), c(rng), 2};
    CHECK(star(x * y) == star(x) * star(y));
    CHECK(star(x + y) == star(x) + star(y));
    CHECK(star(star(x)) == x);
  }
}

TEST_CASE("compare_embed decides exactly near the boundary") {
  const QuadInt s{0, 1, 2};  // √2
  CHECK(compare_embed(s, 1.4142135623730951) == -1);  // √2 < fl(√2)
  CHECK(compare_embed(s, 1.4142135623730949) == 1);
  CHECK(compare_embed(QuadInt{3, 0, 2}, 3.0) == 0);
  CHECK(embed_within(QuadInt{-1, 0, 2}, 1.0));
  CHECK_FALSE(star_within(QuadInt{1, 1, 2}, 0.4142135));
  CHECK(star_within(QuadInt{1, 1, 2}, 0.4142136));
}

TEST_CASE("model_set_1d small windows") {
  const PointPatch P = model_set_1d(1.0, 3.0);
  REQUIRE(P.size() == 5);
  std::vector<double> xs;
  for (std::size_t i = 0; i < P.size(); ++i) xs.push_back(P.q(i)[0]);
  std::sort(xs.begin(), xs.end());
  const double s = std::sqrt(2.0);
  const std::vector<double> want{-1 - s, -1, 0, 1, 1 + s};
  for (std::size_t i = 0; i < 5; ++i) CHECK(xs[i] == doctest::Approx(want[i]).epsilon(1e-15));

  const PointPatch O = model_set_1d(1.0, 0.0);
  REQUIRE(O.size() == 1);
  CHECK(O.exact(0)[0] == QuadInt::integer(0));
}

TEST_CASE("model_set_1d density") {
  const double T = 1e4;
  const PointPatch P = model_set_1d(1.0, T);
  const double density = static_cast<double>(P.size()) / (2 * T);
  CHECK(std::abs(density - 0.70710678118654752) <= 0.01 * 0.70710678118654752);
}

TEST_CASE("to_string of quadratic integers") {
  CHECK(to_string(QuadInt{1, 1, 2}) == "1+1√2");
  CHECK(to_string(QuadInt{3, -2, 2}) == "3-2√2");
}
