#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasilat/group.hpp"
#include "quasilat/pointset.hpp"
#include "quasilat/ring.hpp"

namespace quasilat {

// Monic integer polynomial, coefficients in ascending degree.
struct IntPolynomial {
  std::vector<std::int64_t> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  // Throws kNonMonic unless the leading coefficient is 1 and degree ≥ 1.
  void validate() const;
  std::complex<double> operator()(std::complex<double> x) const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
};

// e.g. "X^2 - 2X - 1"
std::string to_string(const IntPolynomial& p);

// X² − 2aX + (a² − d·b²), or X − a when b = 0.
IntPolynomial min_poly_quadratic(const QuadInt& x);

// Companion-matrix eigenvalues, polished by Newton steps, in a fixed order
// (descending modulus, then descending real part, then descending imaginary).
std::vector<std::complex<double>> polynomial_roots(const IntPolynomial& p);

enum class SpectrumKind { kPisot, kSalem, kNeither, kNotAlgebraicInteger };

std::string to_string(SpectrumKind kind);

inline constexpr double kRootTolerance = 1e-8;

struct SpectrumClassification {
  SpectrumKind kind = SpectrumKind::kNeither;
  std::complex<double> designated;
  std::vector<std::complex<double>> roots;  // all roots, polynomial_roots order
  std::vector<double> conjugate_moduli;     // moduli of the other roots
  std::vector<std::string> warnings;
};

// Relative distance within which t_hint selects a root.
inline constexpr double kHintTolerance = 1e-3;

// Pisot when every other root has modulus < 1 − tol; Salem when all are
// ≤ 1 + tol and one lies within tol of 1; otherwise neither. The designated
// root is the real root greater than 1 closest to `t_hint`, which must lie
// within kHintTolerance·max(1, t_hint) of it.
SpectrumClassification classify_pisot_salem(const IntPolynomial& p, double t_hint, double tol = kRootTolerance);

enum class DilationMode { kAbelian, kStratified2 };

struct DilationReport {
  bool holds = true;
  std::optional<ExactElement> witness;
  std::optional<GroupElement> witness_float;
  Radii tested_core;
  std::size_t checked = 0;
};

// Checks δ_t(x) ∈ P for every x of P in the core shrunk so that images stay
// inside it: core/|t| (abelian), or q-core/|t| and z-core/t² (stratified).
// The first violation in canonical order is the witness.
DilationReport dilation_invariance(const PointPatch& P, const QuadInt& t, DilationMode mode);

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  static Matrix square(std::size_t n, std::vector<double> data);
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Characteristic polynomial det(X·I − M), ascending coefficients.
std::vector<double> characteristic_polynomial(const Matrix& M);
std::vector<std::complex<double>> eigenvalues(const Matrix& M);

struct EigenRecognition {
  std::complex<double> value;
  std::optional<IntPolynomial> min_poly;
  // Classified for real eigenvalues > 1 with a recognized minimal polynomial.
  std::optional<SpectrumClassification> classification;
  // Rational with denominator ≤ 10⁶ but not an integer.
  bool rational_non_integer = false;
  double residual = 0.0;
};

// Degree ≤ 2 integer minimal polynomial of λ, if one fits to 1e−9.
std::optional<IntPolynomial> recognize_quadratic(std::complex<double> lambda, double* residual = nullptr);

enum class GaloisCheck { kHolds, kFails, kUnchecked };

std::string to_string(GaloisCheck g);

struct TowerReport {
  std::vector<double> char_poly;       // of a random completion, ascending
  std::vector<double> block_product;   // Π of block polynomials, ascending
  std::vector<std::complex<double>> spectrum;
  double residual = 0.0;
  bool factored = false;
  bool simple_spectrum = false;
  GaloisCheck galois = GaloisCheck::kUnchecked;
  std::vector<EigenRecognition> eigen;
};

// Places the blocks on the diagonal of a block-upper-triangular matrix with
// random off-diagonal blocks (seeded) and compares its characteristic
// polynomial with the product of the block polynomials.
TowerReport tower_spectrum_check(const std::vector<Matrix>& blocks, std::uint64_t seed = 0);

}  // namespace quasilat
