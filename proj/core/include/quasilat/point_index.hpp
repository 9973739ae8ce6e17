#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quasilat/ring.hpp"

namespace quasilat {

// Matching tolerance for points without exact coordinates (sup norm).
inline constexpr double kMatchTolerance = 1e-9;

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept;
};

// Assigns stable ids to points of a fixed dimension. With exact coordinates,
// identity is equality of the (a, b) pairs; otherwise two points match when
// every coordinate differs by at most the tolerance. A float fuzz of that size
// never splits one point into two.
class PointIndex {
 public:
  PointIndex(std::size_t dim, bool exact, double tolerance = kMatchTolerance);

  std::size_t dim() const { return dim_; }
  bool exact() const { return exact_; }
  std::size_t size() const { return count_; }

  std::optional<std::size_t> find(std::span<const double> coords,
                                  std::span<const QuadInt> exact = {}) const;
  // Returns (id, inserted); a new point receives id size().
  std::pair<std::size_t, bool> insert(std::span<const double> coords,
                                      std::span<const QuadInt> exact = {});

 private:
  std::vector<std::int64_t> exact_key(std::span<const QuadInt> exact) const;
  std::vector<std::int64_t> cell_key(std::span<const double> coords) const;
  std::optional<std::size_t> find_float(std::span<const double> coords) const;

  std::size_t dim_;
  bool exact_;
  double tolerance_;
  double cell_;
  std::size_t count_ = 0;
  std::unordered_map<std::vector<std::int64_t>, std::size_t, KeyHash> exact_ids_;
  std::unordered_multimap<std::vector<std::int64_t>, std::size_t, KeyHash> cells_;
  std::vector<double> coords_;
};

}  // namespace quasilat
