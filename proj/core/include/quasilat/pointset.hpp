#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quasilat/group.hpp"
#include "quasilat/point_index.hpp"
#include "quasilat/ring.hpp"

namespace quasilat {

// Sup-norm box radii for the horizontal (q) and central (z) coordinates.
struct Radii {
  double q = 0.0;
  double z = 0.0;

  friend bool operator==(const Radii&, const Radii&) = default;
};

// Finite truncation of a point set. `window` bounds every stored point;
// `core` is the box inside which the patch is trusted to agree with the
// infinite set. Points are stored flat (z coordinates then q coordinates) in a
// canonical order: increasing gauge, ties broken by decreasing coordinates.
class PointPatch {
 public:
  PointPatch() = default;

  const CentralExtensionGroup& group() const { return group_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t dim() const { return group_.dim(); }

  std::span<const double> coords(std::size_t i) const { return {coords_.data() + i * dim(), dim()}; }
  std::span<const double> z(std::size_t i) const { return coords(i).first(group_.dim_z()); }
  std::span<const double> q(std::size_t i) const { return coords(i).subspan(group_.dim_z()); }
  GroupElement element(std::size_t i) const;

  bool has_exact() const { return has_exact_; }
  std::span<const QuadInt> exact(std::size_t i) const;
  ExactElement exact_element(std::size_t i) const;
  // Common radicand of the exact coordinates (0 when none).
  std::int64_t radicand() const { return radicand_; }

  const Radii& window() const { return window_; }
  const Radii& core() const { return core_; }
  const std::string& provenance() const { return provenance_; }

  std::optional<std::size_t> find(std::span<const double> coords,
                                   std::span<const QuadInt> exact = {}) const;
  bool contains(const GroupElement& g) const;
  bool contains(const ExactElement& g) const;

  // Index set of points inside the box (sup norms) of the given radii.
  bool in_box(std::size_t i, const Radii& box, double slack = 0.0) const;

 private:
  friend class PatchBuilder;

  CentralExtensionGroup group_;
  std::size_t count_ = 0;
  std::vector<double> coords_;
  std::vector<QuadInt> exact_;
  bool has_exact_ = false;
  std::int64_t radicand_ = 0;
  Radii window_;
  Radii core_;
  std::string provenance_;
  std::shared_ptr<const PointIndex> index_;
};

// Accumulates deduplicated points and freezes them into a PointPatch.
class PatchBuilder {
 public:
  PatchBuilder(CentralExtensionGroup group, bool exact, double tolerance = kMatchTolerance);

  const CentralExtensionGroup& group() const { return group_; }
  bool exact() const { return exact_; }
  std::size_t size() const { return index_.size(); }

  // Returns false when the point was already present.
  bool add(std::span<const double> z, std::span<const double> q, std::span<const QuadInt> exact = {});
  bool add(const GroupElement& g);
  bool add(const ExactElement& g);

  // Verifies every point lies in `window` (1e−9 slack) and core ≤ window.
  PointPatch build(Radii window, Radii core, std::string provenance) &&;

 private:
  CentralExtensionGroup group_;
  bool exact_;
  double tolerance_;
  PointIndex index_;
  std::vector<double> coords_;
  std::vector<QuadInt> exact_coords_;
  std::int64_t radicand_ = 0;
};

// Reinterprets a patch in plain abelian ℝ^n (dim_z = 0) as a patch in the
// central factor (dim_q = 0). Patches already central are returned unchanged.
PointPatch as_central(const PointPatch& P);
// Inverse of as_central for abelian patches with dim_q = 0.
PointPatch as_horizontal(const PointPatch& P);

bool is_symmetric(const PointPatch& P);
bool contains_identity(const PointPatch& P);

// {x·y : x ∈ P1, y ∈ P2}; core = min(core1, core2)/2 per coordinate family.
PointPatch minkowski(const PointPatch& P1, const PointPatch& P2);
// {x⁻¹ : x ∈ P}; window and core unchanged.
PointPatch inverse_set(const PointPatch& P);
// g·P with window grown and core shrunk by the translation.
PointPatch translate(const GroupElement& g, const PointPatch& P);
PointPatch translate(const ExactElement& g, const PointPatch& P);
// Points inside the box; window and core clipped to it.
PointPatch crop(const PointPatch& P, const Radii& box);

// Minimum distance over distinct pairs (optionally only pairs inside `region`);
// +∞ when fewer than two points qualify. Throws kEmptyPatch on empty input.
double min_gap(const PointPatch& P);
double min_gap(const PointPatch& P, const Radii& region);

struct CoveringEstimate {
  double value = 0.0;     // grid_max + slack, an upper estimate
  double grid_max = 0.0;  // max over probes of d(probe, P)
  double slack = 0.0;     // bound on d(x, nearest probe) for x in the region
  std::size_t probes = 0;
};

// Probes the box `region` (centred at the identity) on a grid of spacing h.
// The region must lie inside the core (else kBoundaryUnsound).
CoveringEstimate covering_radius(const PointPatch& P, const Radii& region, double h);

struct MeyerLevel {
  int k = 0;
  double min_gap = 0.0;
  Radii core;
  std::size_t size = 0;
  std::size_t core_size = 0;
  bool pass = false;
};

struct MeyerReport {
  std::vector<MeyerLevel> levels;
  bool pass = false;
  Radii usable_core;
  double threshold = 0.0;
};

inline constexpr double kDefaultGapThreshold = 1e-6;

// Builds D = P⁻¹P and D, D², …, D^k_max, recording the min gap of each on its
// core. Stops at the first failing level.
MeyerReport check_meyerian(const PointPatch& P, int k_max, double threshold = kDefaultGapThreshold);

struct CoverReport {
  std::vector<GroupElement> translators;
  std::vector<ExactElement> exact_translators;  // filled when P is exact
  std::size_t covered = 0;                      // points of P² checked
  double max_translator_gauge = 0.0;
};

// Greedy finite F with P² ⊂ P·F on the core of P².
CoverReport approximate_group_cover(const PointPatch& P);

}  // namespace quasilat
