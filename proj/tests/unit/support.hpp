#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "quasilat/pointset.hpp"
#include "quasilat/ring.hpp"

namespace quasilat::test {

// Membership of the i-th point of Q in P, exact when both patches are.
inline bool has_point(const PointPatch& P, const PointPatch& Q, std::size_t i) {
  if (P.has_exact() && Q.has_exact()) return P.find({}, Q.exact(i)).has_value();
  return P.find(Q.coords(i)).has_value();
}

// Membership of a float point; on exact patches the coordinates must be integers.
inline bool has_point(const PointPatch& P, const std::vector<double>& c) {
  if (!P.has_exact()) return P.find(c).has_value();
  std::vector<QuadInt> e;
  for (double v : c) e.push_back(QuadInt::integer(std::llround(v), P.radicand()));
  return P.find({}, e).has_value();
}

}  // namespace quasilat::test
