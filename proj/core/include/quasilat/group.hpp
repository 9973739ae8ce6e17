#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "quasilat/ring.hpp"

namespace quasilat {

// Antisymmetric bilinear cocycle β: Q × Q → Z on Q = ℝ^dim_q, Z = ℝ^dim_z.
// The i-th central coordinate of β(v, w) is vᵀ M_i w.
class Cocycle {
 public:
  Cocycle() = default;
  // entries: dim_z matrices of size dim_q × dim_q, row-major, concatenated.
  Cocycle(std::size_t dim_z, std::size_t dim_q, std::vector<double> entries);

  static Cocycle zero(std::size_t dim_z, std::size_t dim_q);
  // β((x1,x2),(y1,y2)) = x1·y2 − x2·y1 on ℝ², central ℝ.
  static Cocycle heisenberg();
  // Standard symplectic form on ℝ^{2n}: Σ x_i y_{n+i} − x_{n+i} y_i.
  static Cocycle symplectic(std::size_t n);

  std::size_t dim_z() const { return dim_z_; }
  std::size_t dim_q() const { return dim_q_; }
  const std::vector<double>& entries() const { return entries_; }
  double entry(std::size_t i, std::size_t row, std::size_t col) const {
    return entries_[(i * dim_q_ + row) * dim_q_ + col];
  }

  bool is_zero() const { return is_zero_; }
  bool is_integral() const { return is_integral_; }

  // out += β(v, w)
  void accumulate(std::span<const double> v, std::span<const double> w, std::span<double> out) const;
  std::vector<double> operator()(std::span<const double> v, std::span<const double> w) const;
  // Exact variant; requires is_integral().
  void accumulate_exact(std::span<const QuadInt> v, std::span<const QuadInt> w,
                        std::span<QuadInt> out) const;

  // ‖β(v,w)‖∞ ≤ sup_bound()·‖v‖∞·‖w‖∞
  double sup_bound() const { return sup_bound_; }
  // ‖β(v,w)‖₂ ≤ euclid_bound()·‖v‖₂·‖w‖₂
  double euclid_bound() const { return euclid_bound_; }

  // No nonzero v with β(v, ·) ≡ 0.
  bool is_nondegenerate() const;

  friend bool operator==(const Cocycle& a, const Cocycle& b) {
    return a.dim_z_ == b.dim_z_ && a.dim_q_ == b.dim_q_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_z_ = 0;
  std::size_t dim_q_ = 0;
  std::vector<double> entries_;
  std::vector<std::int64_t> integer_entries_;
  bool is_zero_ = true;
  bool is_integral_ = true;
  double sup_bound_ = 0.0;
  double euclid_bound_ = 0.0;
};

// Z ⊕_β Q with the section s(q) = (0, q).
class CentralExtensionGroup {
 public:
  CentralExtensionGroup() = default;
  explicit CentralExtensionGroup(Cocycle cocycle, bool claim_nondegenerate = false);

  // Plain abelian ℝ^n carried in the horizontal factor (dim_z = 0).
  static CentralExtensionGroup abelian(std::size_t n);
  // Abelian ℝ^n carried in the central factor (dim_q = 0, the absolute case).
  static CentralExtensionGroup central(std::size_t n);
  static CentralExtensionGroup heisenberg();

  const Cocycle& cocycle() const { return cocycle_; }
  std::size_t dim_z() const { return cocycle_.dim_z(); }
  std::size_t dim_q() const { return cocycle_.dim_q(); }
  std::size_t dim() const { return dim_z() + dim_q(); }
  bool is_abelian() const { return cocycle_.is_zero(); }
  bool nondegenerate_claimed() const { return nondegenerate_; }

  friend bool operator==(const CentralExtensionGroup& a, const CentralExtensionGroup& b) {
    return a.cocycle_ == b.cocycle_;
  }

 private:
  Cocycle cocycle_;
  bool nondegenerate_ = false;
};

struct GroupElement {
  std::vector<double> z;
  std::vector<double> q;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

// Coordinates in ℤ[√d]; requires an integral cocycle for the group law.
struct ExactElement {
  std::vector<QuadInt> z;
  std::vector<QuadInt> q;

  GroupElement to_float() const;
  friend bool operator==(const ExactElement&, const ExactElement&) = default;
};

GroupElement identity(const CentralExtensionGroup& G);
void check_dims(const CentralExtensionGroup& G, const GroupElement& g);

// (z_g + z_h + β(q_g, q_h), q_g + q_h)
GroupElement mul(const CentralExtensionGroup& G, const GroupElement& g, const GroupElement& h);
// (−z, −q): β(q, −q) = 0 for antisymmetric β.
GroupElement inv(const CentralExtensionGroup& G, const GroupElement& g);
// g·h·g⁻¹·h⁻¹ = (2β(q_g, q_h), 0)
GroupElement commutator(const CentralExtensionGroup& G, const GroupElement& g, const GroupElement& h);
// (t²·z, t·q)
GroupElement dilation(const CentralExtensionGroup& G, double t, const GroupElement& g);

ExactElement mul(const CentralExtensionGroup& G, const ExactElement& g, const ExactElement& h);
ExactElement inv(const CentralExtensionGroup& G, const ExactElement& g);
// Abelian dilation scales every coordinate by t; stratified uses t² on Z.
ExactElement dilation(const CentralExtensionGroup& G, const QuadInt& t, const ExactElement& g,
                      bool stratified);

// Homogeneous gauge max(‖q‖₂, ‖z‖₂^½) for non-abelian cocycles; Euclidean
// norm of (z, q) when the cocycle vanishes.
double gauge(const CentralExtensionGroup& G, std::span<const double> z, std::span<const double> q);
double gauge(const CentralExtensionGroup& G, const GroupElement& g);
// gauge(inv(g)·h), left-invariant.
double distance(const CentralExtensionGroup& G, const GroupElement& g, const GroupElement& h);

// Haar volume of the gauge ball of radius T.
double gauge_ball_volume(const CentralExtensionGroup& G, double T);
// Volume of the Euclidean unit ball in ℝ^n (n = 0 gives 1).
double unit_ball_volume(std::size_t n);

}  // namespace quasilat
