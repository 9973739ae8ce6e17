#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quasilat/group.hpp"
#include "quasilat/pointset.hpp"
#include "quasilat/ring.hpp"

namespace quasilat {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// A lattice in physical × internal space together with a closed box window
// in internal space.
//
// kSilver: each physical coordinate is an independent copy of
// {(a+b√d, a−b√d)}, so physical_dim == internal_dim and window[i] bounds the
// i-th conjugate. Points carry exact coordinates.
// kMatrix: the lattice is B·ℤ^n for the n×n row-major `basis` whose columns
// are the generators; the first physical_dim rows are physical.
struct CutProjectScheme {
  enum class Kind { kSilver, kMatrix };

  Kind kind = Kind::kSilver;
  std::size_t physical_dim = 1;
  std::size_t internal_dim = 1;
  std::vector<double> basis;
  std::vector<Interval> window;
  std::int64_t radicand = 2;

  static CutProjectScheme silver(double R, std::size_t dim = 1, std::int64_t d = 2);
  static CutProjectScheme matrix(std::size_t physical_dim, std::size_t internal_dim, std::vector<double> basis,
                                 std::vector<Interval> window);

  void validate() const;
};

// Physical projections of the lattice points with physical part in
// [−T,T]^physical_dim and internal part in the window. Core equals window.
PointPatch generate_model_set(const CutProjectScheme& scheme, double T);

// ℤ^dim ∩ [−radius, radius]^dim in the abelian group, with exact coordinates
// (radicand 2) so it combines exactly with the silver patches.
PointPatch integer_lattice(std::size_t dim, double radius);

// H₃(ℤ) points with |x|, |y| ≤ q_radius and |z| ≤ z_radius, exact.
PointPatch heisenberg_integer_lattice(double q_radius, double z_radius);

struct SymplecticOptions {
  bool check_condition = true;
  // Only δ with |δ|∞ ≤ check_radius enter the condition check.
  double check_radius = std::numeric_limits<double>::infinity();
};

struct SymplecticProduct {
  PointPatch patch;
  bool condition_holds = false;
  std::size_t values_checked = 0;
  // Largest |β(δ₁+δ₂, δ₃)| met while checking.
  double max_value = 0.0;
};

// Ξ ⊕_β Δ for a central patch Ξ (or an abelian one of dimension dim_z) and a
// horizontal patch Δ, plus the patch-level check β(Δ², Δ) ⊂ Ξ^k.
SymplecticProduct symplectic_product(const PointPatch& xi, const PointPatch& delta, const CentralExtensionGroup& G,
                                     int k, const SymplecticOptions& options = {});

// {q_x : x ∈ P} as a patch in the abelian group of dimension dim_q.
PointPatch project(const PointPatch& P);

// z-parts of the points of P over δ, as a central patch. Empty when δ is not
// in the projection.
PointPatch fiber(const PointPatch& P, std::span<const double> delta, std::span<const QuadInt> exact_delta = {});

// Points of P grouped by their q-part, in canonical patch order.
class FiberIndex {
 public:
  struct Column {
    std::vector<double> delta;
    std::vector<QuadInt> exact_delta;
    std::vector<std::size_t> ids;
  };

  explicit FiberIndex(const PointPatch& P);

  const PointPatch& patch() const { return *P_; }
  const std::vector<Column>& columns() const { return columns_; }
  std::optional<std::size_t> find(std::span<const double> delta, std::span<const QuadInt> exact_delta = {}) const;
  PointPatch fiber(std::size_t column) const;
  bool column_in_core(std::size_t column, double slack = 1e-12) const;

 private:
  const PointPatch* P_;
  std::vector<Column> columns_;
  PointIndex index_;
};

struct FiberReport {
  std::vector<double> delta;
  std::size_t cardinality = 0;
  double covering_estimate = 0.0;
  bool essential = false;
};

struct AlignmentOptions {
  double probe_step = 0.05;
  // z-radius probed for fiber covering; negative means the patch z-core.
  double z_region = -1.0;
};

struct AlignmentReport {
  double projection_min_gap = 0.0;
  std::vector<FiberReport> fibers;
  bool uniformly_large = false;
  double essential_fraction = 0.0;
  double R_threshold = 0.0;
  double z_region = 0.0;
};

// Classifies every fiber over the q-core as essential when its covering
// estimate on the z-region is at most R.
AlignmentReport alignment_report(const PointPatch& P, double R, const AlignmentOptions& options = {});

// Columns of P² (cropped to its core) whose fibers are R-relatively dense.
PointPatch enforce_uniform_fibers(const PointPatch& P, double R, const AlignmentOptions& options = {});

struct FiberProfileRow {
  int k = 0;
  std::size_t max_cardinality = 0;
  std::size_t columns = 0;
  Radii core;
};

// Largest fiber of P^k on its core, for k = 1..k_max.
std::vector<FiberProfileRow> fiber_cardinality_profile(const PointPatch& P, int k_max);

// P with the column over δ replaced by {(z, δ) : z ∈ zs}.
PointPatch replace_fiber(const PointPatch& P, std::span<const double> delta, const std::vector<std::vector<double>>& zs);

}  // namespace quasilat
