#pragma once

#include <cstdint>
#include <string>

namespace quasilat {

class PointPatch;

// Largest coefficient magnitude accepted by ring arithmetic. Results beyond it
// raise ErrorKind::kOverflow instead of wrapping.
inline constexpr std::int64_t kDefaultCoefficientLimit = std::int64_t{1} << 62;

// a + b·√d in ℤ[√d], d squarefree ≥ 2.
struct QuadInt {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t d = 2;

  static QuadInt integer(std::int64_t value, std::int64_t radicand = 2) { return {value, 0, radicand}; }

  // Real embedding a + b√d and its Galois conjugate a − b√d (presentation only).
  double embed() const;
  double star_embed() const;

  bool is_zero() const { return a == 0 && b == 0; }
  friend bool operator==(const QuadInt&, const QuadInt&) = default;
};

QuadInt quad_add(const QuadInt& x, const QuadInt& y,
                 std::int64_t limit = kDefaultCoefficientLimit);
QuadInt quad_sub(const QuadInt& x, const QuadInt& y,
                 std::int64_t limit = kDefaultCoefficientLimit);
QuadInt quad_neg(const QuadInt& x);
QuadInt quad_mul(const QuadInt& x, const QuadInt& y,
                 std::int64_t limit = kDefaultCoefficientLimit);
// Multiplication by a rational integer.
QuadInt quad_scale(const QuadInt& x, std::int64_t k,
                   std::int64_t limit = kDefaultCoefficientLimit);
QuadInt star(const QuadInt& x);

inline QuadInt operator+(const QuadInt& x, const QuadInt& y) { return quad_add(x, y); }
inline QuadInt operator-(const QuadInt& x, const QuadInt& y) { return quad_sub(x, y); }
inline QuadInt operator-(const QuadInt& x) { return quad_neg(x); }
inline QuadInt operator*(const QuadInt& x, const QuadInt& y) { return quad_mul(x, y); }

// Exact sign of embed(x) − r for a double r (−1, 0, +1). No floating rounding
// leaks into the decision; throws kOverflow if the exact fallback cannot be
// represented.
int compare_embed(const QuadInt& x, double r);

// Exact |embed(x)| ≤ bound and |star(x)| ≤ bound (closed windows).
bool embed_within(const QuadInt& x, double bound);
bool star_within(const QuadInt& x, double bound);

std::string to_string(const QuadInt& x);

// {x ∈ ℤ[√d] : |x*| ≤ R, |x| ≤ T} as a patch in (ℝ, +), each point carrying
// its exact (a, b, d) triple. Enumeration is exhaustive.
PointPatch model_set_1d(double R, double T, std::int64_t d = 2);

}  // namespace quasilat
