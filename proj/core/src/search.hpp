#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "quasilat/group.hpp"
#include "quasilat/pointset.hpp"

namespace quasilat::detail {

// Gauge of x⁻¹y, computed without allocating.
inline double pair_distance(const CentralExtensionGroup& G, std::span<const double> x,
                            std::span<const double> y, std::vector<double>& scratch) {
  const std::size_t dz = G.dim_z();
  const std::size_t dq = G.dim_q();
  scratch.resize(dz + dq);
  for (std::size_t k = 0; k < dz + dq; ++k) scratch[k] = y[k] - x[k];
  if (dz > 0 && !G.is_abelian()) {
    std::span<double> z(scratch.data(), dz);
    const auto& beta = G.cocycle();
    for (std::size_t i = 0; i < dz; ++i) {
      double s = 0.0;
      for (std::size_t r = 0; r < dq; ++r)
        for (std::size_t c = 0; c < dq; ++c) s += beta.entry(i, r, c) * x[dz + r] * y[dz + c];
      z[i] -= s;
    }
  }
  std::span<const double> s(scratch);
  return gauge(G, s.first(dz), s.subspan(dz));
}

// Sweep over one coordinate whose absolute difference bounds the distance from
// below: the first coordinate for abelian groups, the first q coordinate
// otherwise.
class SweepSearch {
 public:
  SweepSearch(const PointPatch& P, std::vector<std::size_t> ids) : P_(P), ids_(std::move(ids)) {
    const auto& G = P.group();
    axis_ = (G.is_abelian() || G.dim_q() == 0) ? 0 : G.dim_z();
    std::sort(ids_.begin(), ids_.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    keys_.reserve(ids_.size());
    for (auto id : ids_) keys_.push_back(key(id));
  }

  double min_pair_distance() const {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> scratch;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      for (std::size_t j = i + 1; j < ids_.size() && keys_[j] - keys_[i] < best; ++j) {
        best = std::min(best, pair_distance(P_.group(), P_.coords(ids_[i]), P_.coords(ids_[j]), scratch));
      }
    }
    return best;
  }

  // Nearest patch point to the probe: (patch id, distance).
  std::pair<std::size_t, double> nearest(std::span<const double> probe) const {
    std::pair<std::size_t, double> best{0, std::numeric_limits<double>::infinity()};
    if (ids_.empty()) return best;
    std::vector<double> scratch;
    const double k = probe[axis_];
    const auto mid = static_cast<std::size_t>(std::lower_bound(keys_.begin(), keys_.end(), k) - keys_.begin());
    auto visit = [&](std::size_t r) {
      const double d = pair_distance(P_.group(), probe, P_.coords(ids_[r]), scratch);
      if (d < best.second || (d == best.second && ids_[r] < best.first)) best = {ids_[r], d};
    };
    for (std::size_t r = mid; r < ids_.size() && keys_[r] - k <= best.second; ++r) visit(r);
    for (std::size_t r = mid; r-- > 0 && k - keys_[r] <= best.second;) visit(r);
    return best;
  }

 private:
  double key(std::size_t id) const { return P_.coords(id)[axis_]; }

  const PointPatch& P_;
  std::vector<std::size_t> ids_;
  std::vector<double> keys_;
  std::size_t axis_ = 0;
};

}  // namespace quasilat::detail
