#include "quasilat/point_index.hpp"

#include <cmath>

#include "quasilat/error.hpp"

namespace quasilat {

std::size_t KeyHash::operator()(const std::vector<std::int64_t>& key) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t v : key) {
    std::uint64_t x = static_cast<std::uint64_t>(v);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

PointIndex::PointIndex(std::size_t dim, bool exact, double tolerance)
    : dim_(dim), exact_(exact), tolerance_(tolerance), cell_(4.0 * tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::kInvalidArgument, "match tolerance must be positive");
}

std::vector<std::int64_t> PointIndex::exact_key(std::span<const QuadInt> exact) const {
  if (exact.size() != dim_) {
    throw Error(ErrorKind::kDimensionMismatch, "exact coordinates missing or mis-sized");
  }
  std::vector<std::int64_t> key;
  key.reserve(2 * dim_);
  for (const auto& x : exact) {
    key.push_back(x.a);
    key.push_back(x.b);
  }
  return key;
}

std::vector<std::int64_t> PointIndex::cell_key(std::span<const double> coords) const {
  std::vector<std::int64_t> key(dim_);
  for (std::size_t i = 0; i < dim_; ++i) key[i] = std::llround(coords[i] / cell_);
  return key;
}

std::optional<std::size_t> PointIndex::find_float(std::span<const double> coords) const {
  const auto base = cell_key(coords);
  // Neighbouring cells only matter in coordinates lying within the tolerance
  // of a cell boundary.
  std::vector<int> dirs(dim_, 0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double frac = coords[i] / cell_ - static_cast<double>(base[i]);
    if (frac > 0.25) dirs[i] = 1;
    if (frac < -0.25) dirs[i] = -1;
  }
  std::vector<std::int64_t> key = base;
  std::optional<std::size_t> best;
  // Enumerate subsets of the flagged dimensions.
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < dim_; ++i)
    if (dirs[i] != 0) flagged.push_back(i);
  const std::size_t combos = std::size_t{1} << flagged.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    key = base;
    for (std::size_t j = 0; j < flagged.size(); ++j)
      if (mask & (std::size_t{1} << j)) key[flagged[j]] += dirs[flagged[j]];
    auto [lo, hi] = cells_.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      const double* p = coords_.data() + it->second * dim_;
      bool close = true;
      for (std::size_t i = 0; i < dim_ && close; ++i) close = std::abs(p[i] - coords[i]) <= tolerance_;
      if (close && (!best || it->second < *best)) best = it->second;
    }
  }
  return best;
}

std::optional<std::size_t> PointIndex::find(std::span<const double> coords,
                                            std::span<const QuadInt> exact) const {
  if (exact_) {
    auto it = exact_ids_.find(exact_key(exact));
    if (it == exact_ids_.end()) return std::nullopt;
    return it->second;
  }
  if (coords.size() != dim_) throw Error(ErrorKind::kDimensionMismatch, "coordinate count mismatch");
  return find_float(coords);
}

std::pair<std::size_t, bool> PointIndex::insert(std::span<const double> coords,
                                                std::span<const QuadInt> exact) {
  if (exact_) {
    auto [it, inserted] = exact_ids_.try_emplace(exact_key(exact), count_);
    if (inserted) ++count_;
    return {it->second, inserted};
  }
  if (coords.size() != dim_) throw Error(ErrorKind::kDimensionMismatch, "coordinate count mismatch");
  if (auto id = find_float(coords)) return {*id, false};
  cells_.emplace(cell_key(coords), count_);
  coords_.insert(coords_.end(), coords.begin(), coords.end());
  return {count_++, true};
}

}  // namespace quasilat
