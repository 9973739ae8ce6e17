#include "quasilat/group.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "quasilat/error.hpp"

namespace quasilat {

Cocycle::Cocycle(std::size_t dim_z, std::size_t dim_q, std::vector<double> entries)
    : dim_z_(dim_z), dim_q_(dim_q), entries_(std::move(entries)) {
  if (entries_.size() != dim_z_ * dim_q_ * dim_q_) {
    throw Error(ErrorKind::kDimensionMismatch,
                "cocycle needs " + std::to_string(dim_z_ * dim_q_ * dim_q_) + " entries, got " +
                    std::to_string(entries_.size()));
  }
  double euclid_sq = 0.0;
  for (std::size_t i = 0; i < dim_z_; ++i) {
    double row_sum = 0.0;
    for (std::size_t r = 0; r < dim_q_; ++r) {
      for (std::size_t c = 0; c < dim_q_; ++c) {
        const double v = entry(i, r, c);
        if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidArgument, "cocycle entry not finite");
        if (v != -entry(i, c, r)) {
          throw Error(ErrorKind::kInvalidArgument,
                      "cocycle matrix " + std::to_string(i) + " is not antisymmetric at (" +
                          std::to_string(r) + "," + std::to_string(c) + ")");
        }
        if (v != 0.0) is_zero_ = false;
        if (v != std::round(v) || std::abs(v) > 1e15) is_integral_ = false;
        row_sum += std::abs(v);
        euclid_sq += v * v;
      }
    }
    sup_bound_ = std::max(sup_bound_, row_sum);
  }
  euclid_bound_ = std::sqrt(euclid_sq);
  if (is_integral_) {
    integer_entries_.reserve(entries_.size());
    for (double v : entries_) integer_entries_.push_back(static_cast<std::int64_t>(v));
  }
}

Cocycle Cocycle::zero(std::size_t dim_z, std::size_t dim_q) {
  return Cocycle(dim_z, dim_q, std::vector<double>(dim_z * dim_q * dim_q, 0.0));
}

Cocycle Cocycle::heisenberg() { return symplectic(1); }

Cocycle Cocycle::symplectic(std::size_t n) {
  const std::size_t dq = 2 * n;
  std::vector<double> m(dq * dq, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m[i * dq + (n + i)] = 1.0;
    m[(n + i) * dq + i] = -1.0;
  }
  return Cocycle(1, dq, std::move(m));
}

void Cocycle::accumulate(std::span<const double> v, std::span<const double> w,
                         std::span<double> out) const {
  if (is_zero_) return;
  for (std::size_t i = 0; i < dim_z_; ++i) {
    double acc = 0.0;
    const double* m = entries_.data() + i * dim_q_ * dim_q_;
    for (std::size_t r = 0; r < dim_q_; ++r) {
      if (v[r] == 0.0) continue;
      double row = 0.0;
      for (std::size_t c = 0; c < dim_q_; ++c) row += m[r * dim_q_ + c] * w[c];
      acc += v[r] * row;
    }
    out[i] += acc;
  }
}

std::vector<double> Cocycle::operator()(std::span<const double> v, std::span<const double> w) const {
  std::vector<double> out(dim_z_, 0.0);
  accumulate(v, w, out);
  return out;
}

void Cocycle::accumulate_exact(std::span<const QuadInt> v, std::span<const QuadInt> w,
                               std::span<QuadInt> out) const {
  if (!is_integral_) {
    throw Error(ErrorKind::kInvalidArgument, "exact cocycle evaluation needs integer matrices");
  }
  if (is_zero_) return;
  for (std::size_t i = 0; i < dim_z_; ++i) {
    const std::int64_t* m = integer_entries_.data() + i * dim_q_ * dim_q_;
    for (std::size_t r = 0; r < dim_q_; ++r) {
      for (std::size_t c = 0; c < dim_q_; ++c) {
        const std::int64_t k = m[r * dim_q_ + c];
        if (k == 0) continue;
        out[i] = quad_add(out[i], quad_scale(quad_mul(v[r], w[c]), k));
      }
    }
  }
}

bool Cocycle::is_nondegenerate() const {
  if (dim_q_ == 0) return true;
  if (dim_z_ == 0) return false;
  // β(v, e_j)_i = (M_iᵀ v)_j; stack the transposes.
  Eigen::MatrixXd stacked(dim_z_ * dim_q_, dim_q_);
  for (std::size_t i = 0; i < dim_z_; ++i)
    for (std::size_t r = 0; r < dim_q_; ++r)
      for (std::size_t c = 0; c < dim_q_; ++c) stacked(i * dim_q_ + c, r) = entry(i, r, c);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
  lu.setThreshold(1e-12);
  return static_cast<std::size_t>(lu.rank()) == dim_q_;
}

CentralExtensionGroup::CentralExtensionGroup(Cocycle cocycle, bool claim_nondegenerate)
    : cocycle_(std::move(cocycle)), nondegenerate_(claim_nondegenerate) {
  if (claim_nondegenerate && !cocycle_.is_nondegenerate()) {
    throw Error(ErrorKind::kInvalidArgument, "cocycle claimed non-degenerate but has a radical");
  }
}

CentralExtensionGroup CentralExtensionGroup::abelian(std::size_t n) {
  return CentralExtensionGroup(Cocycle::zero(0, n));
}

CentralExtensionGroup CentralExtensionGroup::central(std::size_t n) {
  return CentralExtensionGroup(Cocycle::zero(n, 0));
}

CentralExtensionGroup CentralExtensionGroup::heisenberg() {
  return CentralExtensionGroup(Cocycle::heisenberg(), true);
}

GroupElement ExactElement::to_float() const {
  GroupElement g;
  g.z.reserve(z.size());
  g.q.reserve(q.size());
  for (const auto& x : z) g.z.push_back(x.embed());
  for (const auto& x : q) g.q.push_back(x.embed());
  return g;
}

GroupElement identity(const CentralExtensionGroup& G) {
  return {std::vector<double>(G.dim_z(), 0.0), std::vector<double>(G.dim_q(), 0.0)};
}

void check_dims(const CentralExtensionGroup& G, const GroupElement& g) {
  if (g.z.size() != G.dim_z() || g.q.size() != G.dim_q()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "element has dims (" + std::to_string(g.z.size()) + "," +
                    std::to_string(g.q.size()) + "), group expects (" +
                    std::to_string(G.dim_z()) + "," + std::to_string(G.dim_q()) + ")");
  }
}

namespace {

void check_exact_dims(const CentralExtensionGroup& G, const ExactElement& g) {
  if (g.z.size() != G.dim_z() || g.q.size() != G.dim_q()) {
    throw Error(ErrorKind::kDimensionMismatch, "exact element dimensions do not match group");
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

GroupElement mul(const CentralExtensionGroup& G, const GroupElement& g, const GroupElement& h) {
  check_dims(G, g);
  check_dims(G, h);
  GroupElement out;
  out.z.resize(G.dim_z());
  out.q.resize(G.dim_q());
  for (std::size_t i = 0; i < G.dim_z(); ++i) out.z[i] = g.z[i] + h.z[i];
  for (std::size_t i = 0; i < G.dim_q(); ++i) out.q[i] = g.q[i] + h.q[i];
  G.cocycle().accumulate(g.q, h.q, out.z);
  return out;
}

GroupElement inv(const CentralExtensionGroup& G, const GroupElement& g) {
  check_dims(G, g);
  GroupElement out = g;
  for (auto& x : out.z) x = -x;
  for (auto& x : out.q) x = -x;
  return out;
}

GroupElement commutator(const CentralExtensionGroup& G, const GroupElement& g,
                        const GroupElement& h) {
  check_dims(G, g);
  check_dims(G, h);
  GroupElement out = identity(G);
  G.cocycle().accumulate(g.q, h.q, out.z);
  for (auto& x : out.z) x *= 2.0;
  return out;
}

GroupElement dilation(const CentralExtensionGroup& G, double t, const GroupElement& g) {
  check_dims(G, g);
  if (!(t > 0.0)) throw Error(ErrorKind::kInvalidArgument, "dilation factor must be positive");
  GroupElement out = g;
  for (auto& x : out.z) x *= t * t;
  for (auto& x : out.q) x *= t;
  return out;
}

ExactElement mul(const CentralExtensionGroup& G, const ExactElement& g, const ExactElement& h) {
  check_exact_dims(G, g);
  check_exact_dims(G, h);
  ExactElement out;
  out.z.resize(G.dim_z());
  out.q.resize(G.dim_q());
  for (std::size_t i = 0; i < G.dim_z(); ++i) out.z[i] = quad_add(g.z[i], h.z[i]);
  for (std::size_t i = 0; i < G.dim_q(); ++i) out.q[i] = quad_add(g.q[i], h.q[i]);
  G.cocycle().accumulate_exact(g.q, h.q, out.z);
  return out;
}

ExactElement inv(const CentralExtensionGroup& G, const ExactElement& g) {
  check_exact_dims(G, g);
  ExactElement out = g;
  for (auto& x : out.z) x = quad_neg(x);
  for (auto& x : out.q) x = quad_neg(x);
  return out;
}

ExactElement dilation(const CentralExtensionGroup& G, const QuadInt& t, const ExactElement& g,
                      bool stratified) {
  check_exact_dims(G, g);
  const QuadInt tz = stratified ? quad_mul(t, t) : t;
  ExactElement out = g;
  for (auto& x : out.z) x = quad_mul(tz, x);
  for (auto& x : out.q) x = quad_mul(t, x);
  return out;
}

double gauge(const CentralExtensionGroup& G, std::span<const double> z, std::span<const double> q) {
  if (G.is_abelian()) {
    double s = 0.0;
    for (double x : z) s += x * x;
    for (double x : q) s += x * x;
    return std::sqrt(s);
  }
  return std::max(norm2(q), std::sqrt(norm2(z)));
}

double gauge(const CentralExtensionGroup& G, const GroupElement& g) {
  check_dims(G, g);
  return gauge(G, g.z, g.q);
}

double distance(const CentralExtensionGroup& G, const GroupElement& g, const GroupElement& h) {
  return gauge(G, mul(G, inv(G, g), h));
}

double unit_ball_volume(std::size_t n) {
  const double half = static_cast<double>(n) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double gauge_ball_volume(const CentralExtensionGroup& G, double T) {
  if (G.is_abelian()) {
    return unit_ball_volume(G.dim()) * std::pow(T, static_cast<double>(G.dim()));
  }
  return unit_ball_volume(G.dim_q()) * std::pow(T, static_cast<double>(G.dim_q())) *
         unit_ball_volume(G.dim_z()) * std::pow(T * T, static_cast<double>(G.dim_z()));
}

}  // namespace quasilat
