#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "quasilat/group.hpp"
#include "quasilat/pointset.hpp"

namespace quasilat {

// ξ_θ(z) = exp(2πi⟨θ,z⟩) on the central factor.
struct Character {
  std::vector<double> theta;

  double phase(std::span<const double> z) const;
  std::complex<double> operator()(std::span<const double> z) const;
  bool is_trivial() const;
};

struct DensityEstimate {
  std::complex<double> value;
  double t_final = 0.0;
  std::vector<std::pair<double, std::complex<double>>> partials;
  // max |v_i − v_final| over the last quartile of the schedule.
  double cauchy_tail = 0.0;
  bool converged = false;
};

inline constexpr double kDefaultScheduleRatio = 1.3;

// Increasing radii T_final·ratio^{−j} that are ≥ t_min, ending at T_final.
std::vector<double> geometric_schedule(double t_final, double t_min = 1.0, double ratio = kDefaultScheduleRatio);

// (1/vol B_T) Σ_{z ∈ F, ‖z‖ ≤ T} conj ξ(z) for each T of the schedule, over
// Euclidean balls. `fiber` is a central patch, or an abelian patch read as one.
DensityEstimate twisted_density(const PointPatch& fiber, const Character& xi, std::span<const double> schedule);
// Single-radius convenience form.
std::complex<double> twisted_density(const PointPatch& fiber, const Character& xi, double T);

// |D_ξ(g·P, q_g+δ, T) − conj ξ(z_g)·conj ξ(β(q_g,δ))·D_ξ(P, δ, T)|.
double equivariance_residual(const PointPatch& P, const GroupElement& g, std::span<const double> delta,
                             const Character& xi, double T);

// Fibers of P over the q-ball of radius S, truncated to the z-ball of radius
// T, kept in memory for repeated evaluation at many characters. When P has no
// q-coordinates (or no z-coordinates, read as central) there is one fiber and
// the normalization over Q is 1.
class PalmEvaluator {
 public:
  PalmEvaluator(const PointPatch& P, double S, double T);

  std::size_t columns() const { return offsets_.size() - 1; }
  double S() const { return S_; }
  double T() const { return T_; }
  bool absolute() const { return absolute_; }

  // D_ξ of one column at radius T.
  std::complex<double> density(std::size_t column, const Character& xi) const;
  // (1/vol B_S) Σ_δ |D_ξ(δ)|²; |D_ξ|² in the absolute case.
  double coefficient(const Character& xi) const;

 private:
  std::size_t dim_z_ = 0;
  double S_ = 0.0;
  double T_ = 0.0;
  bool absolute_ = false;
  double vol_T_ = 1.0;
  double vol_S_ = 1.0;
  std::vector<double> z_;
  std::vector<std::size_t> offsets_;
};

double palm_coefficient(const PointPatch& P, const Character& xi, double S, double T);

struct TestFunction {
  std::function<double(std::span<const double>)> f;
  // f vanishes outside the sup-norm box of this radius.
  double support_radius = 0.0;
};

struct SplitLattice {
  CentralExtensionGroup group;
  PointPatch delta;
  std::complex<double> d_xi_e;
};

// D_ξ(Λ,e)·Σ_{δ ∈ Δ} φ(q+δ)·conj ξ(z + β(q,δ)) at the point (z, q).
std::complex<double> twisted_periodization(const SplitLattice& split, const TestFunction& phi, const Character& xi,
                                           const GroupElement& at);

struct ScanSpec {
  double K = 1.0;
  double h = 1e-3;
};

// Grid −K + i·(2K/N), i = 0..N with N = round(2K/h), in each coordinate.
std::vector<double> scan_axis(const ScanSpec& scan);

struct DualFrequency {
  std::vector<double> theta;
  std::size_t grid_index = 0;
  double residual = 0.0;
};

struct EpsilonDual {
  std::vector<DualFrequency> accepted;
  double max_gap = 0.0;
  std::size_t grid_points = 0;
};

// Grid θ with max_{z ∈ Ξ} |ξ_θ(z) − 1| < eps.
EpsilonDual epsilon_dual(const PointPatch& xi, double eps, const ScanSpec& scan);

// 1D: largest difference between consecutive accepted frequencies. Higher
// dimensions: twice the largest distance from a grid point to the nearest
// accepted frequency. +∞ when nothing is accepted.
double largest_gap(const std::vector<std::vector<double>>& accepted, std::size_t dim, const ScanSpec& scan);

struct SandwichResult {
  double T = 0.0;
  double T_K = 0.0;
  double step = 0.0;
  double lower = 0.0;     // |Ξ ∩ B_T|
  double integral = 0.0;  // ∫_{B_{T+T_K}} Σ_{x ∈ Ξ} ρ(x − n) dn
  double upper = 0.0;     // |Ξ ∩ B_{T+2T_K}|
  // How far the integral sits outside [lower, upper]; 0 when inside.
  double violation = 0.0;
};

// Quartic bump ρ(x) = 15/(16 T_K)·(1 − (x/T_K)²)² on |x| ≤ T_K, unit mass.
double quartic_bump(double x, double T_K);

// Trapezoid quadrature with the given step; one-dimensional Ξ only.
SandwichResult sandwich(const PointPatch& xi, double T, double T_K, double step = 1e-3);

}  // namespace quasilat
