#include "quasilat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "format.hpp"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/parallel.hpp"

namespace quasilat {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

PointPatch central_view(const PointPatch& P, const char* what) {
  const auto& G = P.group();
  if (G.dim_q() == 0) return P;
  if (G.dim_z() == 0) return as_central(P);
  throw Error(ErrorKind::kDimensionMismatch, std::string(what) + " needs a fiber (a patch without q-coordinates)");
}

void check_theta(const Character& xi, std::size_t dim_z) {
  if (xi.theta.size() != dim_z) {
    throw Error(ErrorKind::kDimensionMismatch, "character has " + std::to_string(xi.theta.size()) +
                                                   " frequencies, central dimension is " + std::to_string(dim_z));
  }
}

// Σ conj ξ(z) over n points stored flat.
std::complex<double> conj_sum(const double* z, std::size_t n, std::size_t dim, const Character& xi) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = 0.0;
    for (std::size_t k = 0; k < dim; ++k) p += xi.theta[k] * z[i * dim + k];
    re += std::cos(kTwoPi * p);
    im -= std::sin(kTwoPi * p);
  }
  return {re, im};
}

double cauchy_tail(const std::vector<std::pair<double, std::complex<double>>>& partials) {
  if (partials.empty()) return 0.0;
  const std::size_t n = partials.size();
  const std::size_t start = (3 * (n - 1)) / 4;
  double tail = 0.0;
  for (std::size_t i = start; i < n; ++i) tail = std::max(tail, std::abs(partials[i].second - partials.back().second));
  return tail;
}

}  // namespace

double Character::phase(std::span<const double> z) const {
  if (z.size() != theta.size()) throw Error(ErrorKind::kDimensionMismatch, "character and point dimensions differ");
  double p = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) p += theta[k] * z[k];
  return p;
}

std::complex<double> Character::operator()(std::span<const double> z) const {
  const double p = kTwoPi * phase(z);
  return {std::cos(p), std::sin(p)};
}

bool Character::is_trivial() const {
  return std::all_of(theta.begin(), theta.end(), [](double t) { return t == 0.0; });
}

std::vector<double> geometric_schedule(double t_final, double t_min, double ratio) {
  if (!(t_final > 0.0) || !(t_min > 0.0) || !(ratio > 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "schedule needs t_final, t_min > 0 and ratio > 1");
  }
  std::vector<double> out;
  for (double t = t_final; t >= t_min || out.empty(); t /= ratio) out.push_back(t);
  std::reverse(out.begin(), out.end());
  return out;
}

DensityEstimate twisted_density(const PointPatch& fiber_in, const Character& xi, std::span<const double> schedule) {
  const PointPatch F = central_view(fiber_in, "twisted_density");
  const std::size_t dim = F.group().dim_z();
  check_theta(xi, dim);
  if (schedule.empty()) throw Error(ErrorKind::kInvalidArgument, "empty T schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] > schedule[i - 1]))) {
      throw Error(ErrorKind::kInvalidArgument, "T schedule must be positive and strictly increasing");
    }
  }
  const double t_max = schedule.back();
  if (F.core().z + 1e-12 < t_max) {
    throw Error(ErrorKind::kInsufficientWindow, "fiber core " + detail::num(F.core().z) +
                                                    " is smaller than the largest T " + detail::num(t_max));
  }
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = norm2(F.z(i));
    if (r <= t_max) order.emplace_back(r, i);
  }
  std::sort(order.begin(), order.end());

  DensityEstimate est;
  std::complex<double> sum = 0.0;
  std::size_t next = 0;
  const double unit = unit_ball_volume(dim);
  for (double T : schedule) {
    for (; next < order.size() && order[next].first <= T; ++next) {
      sum += std::conj(xi(F.z(order[next].second)));
    }
    est.partials.emplace_back(T, sum / (unit * std::pow(T, static_cast<double>(dim))));
  }
  est.value = est.partials.back().second;
  est.t_final = t_max;
  est.cauchy_tail = cauchy_tail(est.partials);
  est.converged = est.cauchy_tail < std::max(0.05 * std::abs(est.value), 1e-3);
  return est;
}

std::complex<double> twisted_density(const PointPatch& fiber, const Character& xi, double T) {
  const double s[] = {T};
  return twisted_density(fiber, xi, s).value;
}

double equivariance_residual(const PointPatch& P, const GroupElement& g, std::span<const double> delta,
                             const Character& xi, double T) {
  const auto& G = P.group();
  check_dims(G, g);
  if (delta.size() != G.dim_q()) throw Error(ErrorKind::kDimensionMismatch, "delta has wrong dimension");
  check_theta(xi, G.dim_z());
  if (sup_norm(delta) > P.core().q + 1e-12) {
    throw Error(ErrorKind::kInsufficientWindow, "delta lies outside the q-core of the patch");
  }
  const PointPatch F = fiber(P, delta);
  // The column of g·P over q_g + δ is the column of P over δ shifted by
  // z_g + β(q_g, δ).
  std::vector<double> shift(g.z);
  G.cocycle().accumulate(g.q, delta, shift);
  const PointPatch moved = translate(GroupElement{shift, {}}, F);
  if (moved.core().z + 1e-12 < T) {
    throw Error(ErrorKind::kInsufficientWindow, "translated fiber core " + detail::num(moved.core().z) +
                                                    " is smaller than T " + detail::num(T) +
                                                    "; enlarge the z-window by " + detail::num(T - moved.core().z));
  }
  const std::complex<double> lhs = twisted_density(moved, xi, T);
  const std::complex<double> rhs = std::conj(xi(shift)) * twisted_density(F, xi, T);
  return std::abs(lhs - rhs);
}

PalmEvaluator::PalmEvaluator(const PointPatch& P, double S, double T) : S_(S), T_(T) {
  if (!(T > 0.0)) throw Error(ErrorKind::kInvalidArgument, "T must be positive");
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "palm coefficient of an empty patch");
  const auto& G = P.group();
  absolute_ = G.dim_q() == 0 || G.dim_z() == 0;
  offsets_.push_back(0);
  if (absolute_) {
    const PointPatch F = central_view(P, "palm_coefficient");
    dim_z_ = F.group().dim_z();
    if (F.core().z + 1e-12 < T) {
      throw Error(ErrorKind::kInsufficientWindow,
                  "core " + detail::num(F.core().z) + " is smaller than T " + detail::num(T));
    }
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (norm2(F.z(i)) <= T) z_.insert(z_.end(), F.z(i).begin(), F.z(i).end());
    }
    offsets_.push_back(z_.size() / std::max<std::size_t>(dim_z_, 1));
  } else {
    if (!(S > 0.0)) throw Error(ErrorKind::kInvalidArgument, "S must be positive");
    dim_z_ = G.dim_z();
    if (P.core().q + 1e-12 < S || P.core().z + 1e-12 < T) {
      throw Error(ErrorKind::kInsufficientWindow, "patch core (q " + detail::num(P.core().q) + ", z " +
                                                      detail::num(P.core().z) + ") does not support S " +
                                                      detail::num(S) + ", T " + detail::num(T));
    }
    const FiberIndex index(P);
    for (const auto& col : index.columns()) {
      if (norm2(col.delta) > S) continue;
      for (auto id : col.ids) {
        if (norm2(P.z(id)) <= T) z_.insert(z_.end(), P.z(id).begin(), P.z(id).end());
      }
      offsets_.push_back(z_.size() / dim_z_);
    }
    vol_S_ = unit_ball_volume(G.dim_q()) * std::pow(S, static_cast<double>(G.dim_q()));
  }
  vol_T_ = unit_ball_volume(dim_z_) * std::pow(T, static_cast<double>(dim_z_));
}

std::complex<double> PalmEvaluator::density(std::size_t column, const Character& xi) const {
  check_theta(xi, dim_z_);
  const std::size_t b = offsets_[column], e = offsets_[column + 1];
  return conj_sum(z_.data() + b * dim_z_, e - b, dim_z_, xi) / vol_T_;
}

double PalmEvaluator::coefficient(const Character& xi) const {
  check_theta(xi, dim_z_);
  const std::size_t n = columns();
  std::vector<double> partial(chunk_count(n), 0.0);
  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t c = begin; c < end; ++c) s += std::norm(density(c, xi));
    partial[chunk] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total / vol_S_;
}

double palm_coefficient(const PointPatch& P, const Character& xi, double S, double T) {
  return PalmEvaluator(P, S, T).coefficient(xi);
}

std::complex<double> twisted_periodization(const SplitLattice& split, const TestFunction& phi, const Character& xi,
                                           const GroupElement& at) {
  const auto& G = split.group;
  check_dims(G, at);
  check_theta(xi, G.dim_z());
  const PointPatch& D = split.delta;
  if (D.group().dim_z() != 0 || D.group().dim_q() != G.dim_q()) {
    throw Error(ErrorKind::kDimensionMismatch, "Delta must be a patch in a space of dimension dim_q");
  }
  if (!phi.f) throw Error(ErrorKind::kInvalidArgument, "test function is empty");
  const double reach = sup_norm(at.q) + phi.support_radius;
  if (reach > D.core().q + 1e-12) {
    throw Error(ErrorKind::kBoundaryUnsound, "support of phi reaches " + detail::num(reach) +
                                                 " beyond the Delta core " + detail::num(D.core().q));
  }
  std::complex<double> sum = 0.0;
  std::vector<double> shifted(G.dim_q());
  std::vector<double> z(G.dim_z());
  for (std::size_t i = 0; i < D.size(); ++i) {
    const auto d = D.q(i);
    for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] = at.q[k] + d[k];
    if (sup_norm(shifted) > phi.support_radius) continue;
    const double v = phi.f(shifted);
    if (v == 0.0) continue;
    std::copy(at.z.begin(), at.z.end(), z.begin());
    G.cocycle().accumulate(at.q, d, z);
    sum += v * std::conj(xi(z));
  }
  return split.d_xi_e * sum;
}

std::vector<double> scan_axis(const ScanSpec& scan) {
  if (!(scan.K > 0.0) || !(scan.h > 0.0)) throw Error(ErrorKind::kInvalidArgument, "scan needs K > 0 and h > 0");
  const auto n = static_cast<std::size_t>(std::llround(2.0 * scan.K / scan.h));
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "scan step h exceeds the range 2K");
  std::vector<double> axis(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    axis[i] = -scan.K + 2.0 * scan.K * static_cast<double>(i) / static_cast<double>(n);
  return axis;
}

EpsilonDual epsilon_dual(const PointPatch& xi_in, double eps, const ScanSpec& scan) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be positive");
  const PointPatch X = central_view(xi_in, "epsilon_dual");
  const std::size_t dim = X.group().dim_z();
  const auto axis = scan_axis(scan);
  // Every residual is at most 2, so eps = 2 accepts the whole grid.
  const bool accept_all = eps >= 2.0;
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= axis.size();
  std::vector<double> z(X.size() * dim);
  for (std::size_t i = 0; i < X.size(); ++i) std::copy(X.z(i).begin(), X.z(i).end(), z.begin() + i * dim);

  std::vector<std::vector<DualFrequency>> found(chunk_count(total));
  parallel_chunks(total, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<double> theta(dim);
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      for (std::size_t k = 0; k < dim; ++k) {
        theta[k] = axis[rem % axis.size()];
        rem /= axis.size();
      }
      double worst = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < X.size(); ++i) {
        double p = 0.0;
        for (std::size_t k = 0; k < dim; ++k) p += theta[k] * z[i * dim + k];
        // |exp(2πip) − 1| = 2|sin(πp)|
        worst = std::max(worst, 2.0 * std::abs(std::sin(std::numbers::pi * p)));
        if (!(worst < eps) && !accept_all) {
          ok = false;
          break;
        }
      }
      if (ok) found[chunk].push_back({theta, flat, worst});
    }
  });
  EpsilonDual out;
  out.grid_points = total;
  std::vector<std::vector<double>> thetas;
  for (auto& part : found) {
    for (auto& f : part) {
      thetas.push_back(f.theta);
      out.accepted.push_back(std::move(f));
    }
  }
  out.max_gap = largest_gap(thetas, dim, scan);
  return out;
}

double largest_gap(const std::vector<std::vector<double>>& accepted, std::size_t dim, const ScanSpec& scan) {
  if (accepted.empty()) return std::numeric_limits<double>::infinity();
  if (dim == 1) {
    std::vector<double> t;
    t.reserve(accepted.size());
    for (const auto& a : accepted) t.push_back(a[0]);
    std::sort(t.begin(), t.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) gap = std::max(gap, t[i] - t[i - 1]);
    return gap;
  }
  const auto axis = scan_axis(scan);
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= axis.size();
  double worst = 0.0;
  std::vector<double> p(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = 0; k < dim; ++k) {
      p[k] = axis[rem % axis.size()];
      rem /= axis.size();
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : accepted) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += (a[k] - p[k]) * (a[k] - p[k]);
      best = std::min(best, s);
    }
    worst = std::max(worst, std::sqrt(best));
  }
  return 2.0 * worst;
}

double quartic_bump(double x, double T_K) {
  const double u = x / T_K;
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return 15.0 / (16.0 * T_K) * w * w;
}

SandwichResult sandwich(const PointPatch& xi_in, double T, double T_K, double step) {
  if (!(T > 0.0) || !(T_K > 0.0) || !(step > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "sandwich needs T, T_K and step positive");
  }
  const PointPatch X = central_view(xi_in, "sandwich");
  if (X.group().dim_z() != 1) throw Error(ErrorKind::kDimensionMismatch, "sandwich quadrature is one-dimensional");
  const double outer = T + 2.0 * T_K;
  if (X.core().z + 1e-12 < outer) {
    throw Error(ErrorKind::kInsufficientWindow,
                "core " + detail::num(X.core().z) + " is smaller than T + 2T_K = " + detail::num(outer));
  }
  SandwichResult r;
  r.T = T;
  r.T_K = T_K;
  r.step = step;
  std::vector<double> pts;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double x = X.z(i)[0];
    if (std::abs(x) <= T) r.lower += 1.0;
    if (std::abs(x) <= outer) {
      r.upper += 1.0;
      pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  // Each point contributes ∫ ρ(x − n) over n ∈ [−(T+T_K), T+T_K] ∩ [x−T_K, x+T_K].
  const double edge = T + T_K;
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * edge / step));
  const double dn = 2.0 * edge / static_cast<double>(n);
  double total = 0.0;
  for (double x : pts) {
    const double a = std::max(-edge, x - T_K);
    const double b = std::min(edge, x + T_K);
    if (a >= b) continue;
    const auto i0 = static_cast<std::size_t>(std::ceil((a + edge) / dn - 1e-12));
    const auto i1 = static_cast<std::size_t>(std::floor((b + edge) / dn + 1e-12));
    double s = 0.0;
    for (std::size_t i = i0; i <= i1 && i <= n; ++i) {
      const double node = -edge + dn * static_cast<double>(i);
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      s += w * quartic_bump(x - node, T_K);
    }
    total += s * dn;
  }
  r.integral = total;
  r.violation = std::max({0.0, r.lower - r.integral, r.integral - r.upper});
  return r;
}

}  // namespace quasilat
