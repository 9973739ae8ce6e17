#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "quasilat/group.hpp"
#include "quasilat/pointset.hpp"
#include "quasilat/spectral.hpp"

namespace quasilat {

struct Atom {
  std::vector<double> z;
  std::vector<double> q;
  std::vector<QuadInt> exact;  // z then q; empty without exact coordinates
  double weight = 0.0;
};

// Σ weight·δ_point. Atoms are kept in canonical order (gauge ascending, then
// coordinates descending).
struct WeightedPointMeasure {
  CentralExtensionGroup group;
  std::vector<Atom> atoms;
  double range = 0.0;
  double normalization = 1.0;

  // Weight at a point (0 when absent); matched within 1e−9.
  double weight_at(std::span<const double> z, std::span<const double> q) const;
};

// Volume-normalized difference measure of P over the gauge ball B_T, keeping
// differences of gauge ≤ range. Each pair (x, y) with x ∈ B_T contributes
// half its weight to x⁻¹y and half to y⁻¹x, so the output is symmetric.
WeightedPointMeasure autocorrelation(const PointPatch& P, double T, double range);

// Atoms over the identity of the projection, as a measure on the central
// factor. A measure without q-coordinates is returned as is (relabelled as
// central when it has no z-coordinates either).
WeightedPointMeasure central_autocorrelation(const WeightedPointMeasure& eta);

// (1/vol B_T)·Re Σ_{‖z‖ ≤ T} w(z)·conj ξ(z) over a central measure.
double diffraction_atom(const WeightedPointMeasure& eta_e, const Character& xi, double T);

// Σ_{i,j} ψ_i·conj ψ_j·η(z_j − z_i) over a central measure.
std::complex<double> eta_quadratic_form(const WeightedPointMeasure& eta_e,
                                        const std::vector<std::pair<std::vector<double>, std::complex<double>>>& psi);

struct BraggOptions {
  // Radius of the sub-window of P whose square provides the identity fiber
  // for the ε-dual cross-check; clipped to the core of P. ≤ 0 skips the check.
  double dual_window = 400.0;
};

struct BraggPeak {
  std::vector<double> theta;
  double c_xi = 0.0;
};

struct BraggResult {
  std::vector<BraggPeak> scan;   // every grid frequency
  std::vector<BraggPeak> peaks;  // c_ξ ≥ (1−ε)·c₁
  double c_1 = 0.0;
  double eps = 0.0;
  double max_gap = 0.0;
  bool dual_checked = false;
  std::size_t dual_frequencies = 0;
  std::vector<std::vector<double>> dual_missing;
};

BraggResult bragg_scan(const PointPatch& P, double eps, const ScanSpec& scan, double S, double T,
                       const BraggOptions& options = {});

struct SplitData {
  CentralExtensionGroup group;
  PointPatch xi;     // the common fiber, as a central patch
  PointPatch delta;  // the projection
};

struct ConsistencyResult {
  std::complex<double> lhs;  // ergodic average of P f, by quadrature
  std::complex<double> rhs;  // P_ξ f_ξ in closed form
  double residual = 0.0;
  std::string warning;
};

// Compares the z-quadrature of (1/vol B_T)∫ conj ξ(z)·Pf(z⁻¹Λ) dz with
// D_ξ·f_ξ·Σ_δ φ(δ) for f = ψ ⊗ φ on a split lattice with one-dimensional
// centre.
ConsistencyResult projection_consistency(const SplitData& split, const TestFunction& psi, const TestFunction& phi,
                                         const Character& xi, double T, double h_z);

}  // namespace quasilat
