#include "quasilat/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "format.hpp"
#include "quasilat/cutproject.hpp"
#include "quasilat/error.hpp"
#include "quasilat/parallel.hpp"
#include "quasilat/point_index.hpp"

namespace quasilat {
namespace {

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

// Weighted points keyed like PointIndex, in insertion order.
struct Accumulator {
  Accumulator(std::size_t dim, bool exact) : index(dim, exact), dim(dim), exact(exact) {}

  void add(std::span<const double> c, std::span<const QuadInt> e, double w) {
    auto [id, inserted] = index.insert(c, e);
    if (inserted) {
      coords.insert(coords.end(), c.begin(), c.end());
      if (exact) exact_coords.insert(exact_coords.end(), e.begin(), e.end());
      weights.push_back(0.0);
    }
    weights[id] += w;
  }

  std::size_t size() const { return weights.size(); }
  std::span<const double> at(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  std::span<const QuadInt> exact_at(std::size_t i) const {
    return exact ? std::span<const QuadInt>(exact_coords.data() + i * dim, dim) : std::span<const QuadInt>{};
  }

  PointIndex index;
  std::size_t dim;
  bool exact;
  std::vector<double> coords;
  std::vector<QuadInt> exact_coords;
  std::vector<double> weights;
};

void sort_atoms(const CentralExtensionGroup& G, std::vector<Atom>& atoms) {
  std::vector<double> g(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) g[i] = gauge(G, atoms[i].z, atoms[i].q);
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (g[a] != g[b]) return g[a] < g[b];
    if (atoms[a].z != atoms[b].z) return atoms[a].z > atoms[b].z;
    return atoms[a].q > atoms[b].q;
  });
  std::vector<Atom> sorted;
  sorted.reserve(atoms.size());
  for (auto i : order) sorted.push_back(std::move(atoms[i]));
  atoms = std::move(sorted);
}

std::vector<std::int64_t> cell_of(std::span<const double> c, std::size_t first, std::size_t count, double cell) {
  std::vector<std::int64_t> key(count);
  for (std::size_t k = 0; k < count; ++k) key[k] = static_cast<std::int64_t>(std::floor(c[first + k] / cell));
  return key;
}

}  // namespace

double WeightedPointMeasure::weight_at(std::span<const double> z, std::span<const double> q) const {
  for (const auto& a : atoms) {
    bool match = a.z.size() == z.size() && a.q.size() == q.size();
    for (std::size_t k = 0; k < z.size() && match; ++k) match = std::abs(a.z[k] - z[k]) <= kMatchTolerance;
    for (std::size_t k = 0; k < q.size() && match; ++k) match = std::abs(a.q[k] - q[k]) <= kMatchTolerance;
    if (match) return a.weight;
  }
  return 0.0;
}

WeightedPointMeasure autocorrelation(const PointPatch& P, double T, double range) {
  if (!(T > 0.0) || !(range >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "autocorrelation needs T > 0, range ≥ 0");
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "autocorrelation of an empty patch");
  const auto& G = P.group();
  const std::size_t dz = G.dim_z(), dq = G.dim_q(), dim = dz + dq;
  const bool abelian = G.is_abelian();
  const double need_q = T + range;
  const double need_z = abelian ? T + range : T * T + range * range + G.cocycle().sup_bound() * T * range;
  if ((dq > 0 && P.core().q + 1e-12 < need_q) || (dz > 0 && P.core().z + 1e-12 < need_z)) {
    throw Error(ErrorKind::kInsufficientWindow, "autocorrelation needs core (q " + detail::num(dq ? need_q : 0.0) +
                                                    ", z " + detail::num(dz ? need_z : 0.0) + "), patch core is (q " +
                                                    detail::num(P.core().q) + ", z " + detail::num(P.core().z) + ")");
  }
  const bool exact = P.has_exact() && G.cocycle().is_integral();

  // Buckets over every coordinate (abelian) or over q: a difference of gauge
  // ≤ range moves each bucketed coordinate by at most one cell.
  const std::size_t first = abelian ? 0 : dz;
  const std::size_t count = abelian ? dim : dq;
  const double cell = range > 0.0 ? range : 1.0;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> buckets;
  for (std::size_t i = 0; i < P.size(); ++i) buckets[cell_of(P.coords(i), first, count, cell)].push_back(i);
  std::vector<std::size_t> xs;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (gauge(G, P.z(i), P.q(i)) <= T) xs.push_back(i);

  const double vol = gauge_ball_volume(G, T);
  const double half = 0.5 / vol;
  std::vector<Accumulator> parts(chunk_count(xs.size()), Accumulator(dim, exact));
  parallel_chunks(xs.size(), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Accumulator& acc = parts[chunk];
    std::vector<double> d(dim), dinv(dim);
    std::vector<QuadInt> e(exact ? dim : 0), einv(exact ? dim : 0);
    std::vector<std::int64_t> probe(count);
    std::size_t neighbours = 1;
    for (std::size_t k = 0; k < count; ++k) neighbours *= 3;
    for (std::size_t r = begin; r < end; ++r) {
      const std::size_t x = xs[r];
      const auto cx = P.coords(x);
      const auto home = cell_of(cx, first, count, cell);
      for (std::size_t nb = 0; nb < neighbours; ++nb) {
        std::size_t rem = nb;
        for (std::size_t k = 0; k < count; ++k) {
          probe[k] = home[k] + static_cast<std::int64_t>(rem % 3) - 1;
          rem /= 3;
        }
        const auto it = buckets.find(probe);
        if (it == buckets.end()) continue;
        for (const std::size_t y : it->second) {
          const auto cy = P.coords(y);
          for (std::size_t k = 0; k < dim; ++k) d[k] = cy[k] - cx[k];
          if (!abelian) {
            // x⁻¹y = (z_y − z_x − β(q_x, q_y), q_y − q_x); −β(q_x,q_y) = β(q_y,q_x).
            G.cocycle().accumulate(cy.subspan(dz), cx.subspan(dz), std::span<double>(d).first(dz));
          }
          const std::span<const double> ds(d);
          if (gauge(G, ds.first(dz), ds.subspan(dz)) > range + 1e-12) continue;
          for (std::size_t k = 0; k < dim; ++k) dinv[k] = -d[k];
          if (exact) {
            const auto ex = P.exact(x);
            const auto ey = P.exact(y);
            for (std::size_t k = 0; k < dim; ++k) e[k] = quad_sub(ey[k], ex[k]);
            if (!abelian) {
              G.cocycle().accumulate_exact(ey.subspan(dz), ex.subspan(dz), std::span<QuadInt>(e).first(dz));
              for (std::size_t k = 0; k < dz; ++k) d[k] = e[k].embed();
              for (std::size_t k = 0; k < dim; ++k) dinv[k] = -d[k];
            }
            for (std::size_t k = 0; k < dim; ++k) einv[k] = quad_neg(e[k]);
          }
          acc.add(d, e, half);
          acc.add(dinv, einv, half);
        }
      }
    }
  });

  Accumulator total(dim, exact);
  for (const auto& part : parts)
    for (std::size_t i = 0; i < part.size(); ++i) total.add(part.at(i), part.exact_at(i), part.weights[i]);

  WeightedPointMeasure eta;
  eta.group = G;
  eta.range = range;
  eta.normalization = vol;
  eta.atoms.reserve(total.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    Atom a;
    const auto c = total.at(i);
    a.z.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(dz));
    a.q.assign(c.begin() + static_cast<std::ptrdiff_t>(dz), c.end());
    const auto ec = total.exact_at(i);
    a.exact.assign(ec.begin(), ec.end());
    a.weight = total.weights[i];
    eta.atoms.push_back(std::move(a));
  }
  sort_atoms(G, eta.atoms);
  return eta;
}

WeightedPointMeasure central_autocorrelation(const WeightedPointMeasure& eta) {
  const auto& G = eta.group;
  const std::size_t dz = G.dim_z(), dq = G.dim_q();
  if (dq == 0) return eta;
  WeightedPointMeasure out;
  out.normalization = eta.normalization;
  if (dz == 0) {
    out.group = CentralExtensionGroup::central(dq);
    out.range = eta.range;
    for (const auto& a : eta.atoms) out.atoms.push_back({a.q, {}, a.exact, a.weight});
    return out;
  }
  out.group = CentralExtensionGroup::central(dz);
  out.range = G.is_abelian() ? eta.range : eta.range * eta.range;
  for (const auto& a : eta.atoms) {
    bool at_identity;
    if (!a.exact.empty()) {
      at_identity = std::all_of(a.exact.begin() + static_cast<std::ptrdiff_t>(dz), a.exact.end(),
                                [](const QuadInt& v) { return v.is_zero(); });
    } else {
      at_identity = sup_norm(a.q) <= kMatchTolerance;
    }
    if (!at_identity) continue;
    std::vector<QuadInt> ez;
    if (!a.exact.empty()) ez.assign(a.exact.begin(), a.exact.begin() + static_cast<std::ptrdiff_t>(dz));
    out.atoms.push_back({a.z, {}, std::move(ez), a.weight});
  }
  sort_atoms(out.group, out.atoms);
  return out;
}

double diffraction_atom(const WeightedPointMeasure& eta_e, const Character& xi, double T) {
  const auto& G = eta_e.group;
  if (G.dim_q() != 0) throw Error(ErrorKind::kDimensionMismatch, "diffraction_atom needs a central measure");
  if (xi.theta.size() != G.dim_z()) throw Error(ErrorKind::kDimensionMismatch, "character has wrong dimension");
  if (!(T > 0.0)) throw Error(ErrorKind::kInvalidArgument, "T must be positive");
  if (eta_e.range + 1e-12 < T) {
    throw Error(ErrorKind::kInsufficientWindow, "measure is truncated at " + detail::num(eta_e.range) +
                                                    ", below the averaging radius " + detail::num(T));
  }
  double re = 0.0;
  for (const auto& a : eta_e.atoms) {
    if (norm2(a.z) > T) continue;
    re += a.weight * std::cos(2.0 * std::numbers::pi * xi.phase(a.z));
  }
  return re / (unit_ball_volume(G.dim_z()) * std::pow(T, static_cast<double>(G.dim_z())));
}

std::complex<double> eta_quadratic_form(
    const WeightedPointMeasure& eta_e, const std::vector<std::pair<std::vector<double>, std::complex<double>>>& psi) {
  const auto& G = eta_e.group;
  if (G.dim_q() != 0) throw Error(ErrorKind::kDimensionMismatch, "quadratic form needs a central measure");
  const std::size_t dim = G.dim_z();
  PointIndex index(dim, false);
  for (const auto& a : eta_e.atoms) index.insert(a.z);
  std::vector<double> d(dim);
  std::complex<double> s = 0.0;
  for (const auto& [zi, pi] : psi) {
    for (const auto& [zj, pj] : psi) {
      for (std::size_t k = 0; k < dim; ++k) d[k] = zj[k] - zi[k];
      if (auto id = index.find(d)) s += pi * std::conj(pj) * eta_e.atoms[*id].weight;
    }
  }
  return s;
}

BraggResult bragg_scan(const PointPatch& P, double eps, const ScanSpec& scan, double S, double T,
                       const BraggOptions& options) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::kInvalidArgument, "eps must lie in (0, 1)");
  const PalmEvaluator palm(P, S, T);
  const std::size_t dim = P.group().dim_q() == 0 || P.group().dim_z() == 0 ? P.group().dim() : P.group().dim_z();
  BraggResult out;
  out.eps = eps;
  out.c_1 = palm.coefficient(Character{std::vector<double>(dim, 0.0)});
  if (!(out.c_1 >= 1e-9)) {
    throw Error(ErrorKind::kDegenerateDensity, "c_1 = " + detail::num(out.c_1) + " is below 1e-9");
  }
  const auto axis = scan_axis(scan);
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= axis.size();
  out.scan.resize(total);
  // Few fibers: parallel over θ. Many fibers: the evaluator parallelizes.
  const bool per_theta = palm.columns() < 4 * thread_count();
  auto evaluate = [&](std::size_t flat) {
    std::vector<double> theta(dim);
    std::size_t rem = flat;
    for (std::size_t k = 0; k < dim; ++k) {
      theta[k] = axis[rem % axis.size()];
      rem /= axis.size();
    }
    const double c = palm.coefficient(Character{theta});
    out.scan[flat] = {std::move(theta), c};
  };
  if (per_theta) {
    parallel_chunks(total, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t f = begin; f < end; ++f) evaluate(f);
    });
  } else {
    for (std::size_t f = 0; f < total; ++f) evaluate(f);
  }
  std::vector<std::vector<double>> peak_thetas;
  for (const auto& s : out.scan) {
    if (s.c_xi >= (1.0 - eps) * out.c_1) {
      out.peaks.push_back(s);
      peak_thetas.push_back(s.theta);
    }
  }
  out.max_gap = largest_gap(peak_thetas, dim, scan);

  // ε-dual of the identity fiber of P² on a sub-window, cross-checked
  // against the peaks.
  const auto& G = P.group();
  double w = options.dual_window;
  if (w < 0.0) w = G.is_abelian() ? 400.0 : 8.0;
  if (w > 0.0) {
    const PointPatch C = (G.dim_q() == 0 || G.dim_z() == 0) ? (G.dim_q() == 0 ? P : as_central(P)) : P;
    const auto& CG = C.group();
    const Radii box{std::min(w, C.core().q), std::min(G.is_abelian() ? w : w * w, C.core().z)};
    const PointPatch sub = crop(C, box);
    const FiberIndex index(sub);
    const bool exact = sub.has_exact() && CG.cocycle().is_integral();
    PatchBuilder fb(CentralExtensionGroup::central(CG.dim_z()), exact);
    std::vector<double> z(CG.dim_z());
    std::vector<double> neg(CG.dim_q());
    std::vector<QuadInt> ez(exact ? CG.dim_z() : 0);
    for (const auto& col : index.columns()) {
      for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -col.delta[k];
      std::vector<QuadInt> eneg;
      for (const auto& v : col.exact_delta) eneg.push_back(quad_neg(v));
      const auto partner = index.find(neg, eneg);
      if (!partner) continue;
      for (auto i : col.ids) {
        for (auto j : index.columns()[*partner].ids) {
          for (std::size_t k = 0; k < z.size(); ++k) z[k] = sub.z(i)[k] + sub.z(j)[k];
          CG.cocycle().accumulate(sub.q(i), sub.q(j), z);
          if (exact) {
            for (std::size_t k = 0; k < z.size(); ++k) ez[k] = quad_add(sub.exact(i)[k], sub.exact(j)[k]);
            CG.cocycle().accumulate_exact(sub.exact(i).subspan(CG.dim_z()), sub.exact(j).subspan(CG.dim_z()), ez);
            for (std::size_t k = 0; k < z.size(); ++k) z[k] = ez[k].embed();
          }
          fb.add(z, {}, ez);
        }
      }
    }
    const double reach = 2.0 * box.z + CG.cocycle().sup_bound() * box.q * box.q;
    const PointPatch identity_fiber = std::move(fb).build({0.0, reach}, {0.0, box.z / 2.0}, "identity fiber of P^2");
    const PointPatch F = crop(identity_fiber, {0.0, box.z / 2.0});
    if (F.size() >= 1 && box.z > 0.0) {
      const EpsilonDual dual = epsilon_dual(F, eps, scan);
      out.dual_checked = true;
      out.dual_frequencies = dual.accepted.size();
      const double tol = 2.0 * scan.K / static_cast<double>(axis.size() - 1) * (1.0 + 1e-9);
      std::vector<double> sorted1d;
      if (dim == 1) {
        for (const auto& p : peak_thetas) sorted1d.push_back(p[0]);
        std::sort(sorted1d.begin(), sorted1d.end());
      }
      for (const auto& f : dual.accepted) {
        bool present = false;
        if (dim == 1) {
          const auto it = std::lower_bound(sorted1d.begin(), sorted1d.end(), f.theta[0] - tol);
          present = it != sorted1d.end() && *it <= f.theta[0] + tol;
        } else {
          for (const auto& p : peak_thetas) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) s = std::max(s, std::abs(p[k] - f.theta[k]));
            if (s <= tol) {
              present = true;
              break;
            }
          }
        }
        if (!present) out.dual_missing.push_back(f.theta);
      }
    }
  }
  return out;
}

ConsistencyResult projection_consistency(const SplitData& split, const TestFunction& psi, const TestFunction& phi,
                                         const Character& xi, double T, double h_z) {
  const auto& G = split.group;
  if (G.dim_z() != 1) throw Error(ErrorKind::kDimensionMismatch, "projection_consistency needs a one-dimensional centre");
  if (!(T > 0.0) || !(h_z > 0.0)) throw Error(ErrorKind::kInvalidArgument, "T and h_z must be positive");
  if (!psi.f || !phi.f) throw Error(ErrorKind::kInvalidArgument, "test functions must be set");
  const PointPatch X = split.xi.group().dim_q() == 0 ? split.xi : as_central(split.xi);
  const double a = psi.support_radius;
  if (X.core().z + 1e-12 < T + a) {
    throw Error(ErrorKind::kInsufficientWindow,
                "Xi core " + detail::num(X.core().z) + " is smaller than T + supp(psi) = " + detail::num(T + a));
  }
  ConsistencyResult out;
  if (a < 10.0 * h_z) out.warning = "quadrature step " + detail::num(h_z) + " is coarse for psi support " + detail::num(a);

  double phi_sum = 0.0;
  for (std::size_t i = 0; i < split.delta.size(); ++i) phi_sum += phi.f(split.delta.q(i));

  // f_ξ = Σ_grid ψ(u)·ξ(u)·h_z
  std::complex<double> f_xi = 0.0;
  const auto m = static_cast<std::int64_t>(std::ceil(a / h_z));
  for (std::int64_t j = -m; j <= m; ++j) {
    const double u = static_cast<double>(j) * h_z;
    const double v = psi.f(std::span<const double>(&u, 1));
    if (v != 0.0) f_xi += v * xi(std::span<const double>(&u, 1)) * h_z;
  }
  out.rhs = twisted_density(X, xi, T) * f_xi * phi_sum;

  std::vector<double> pts;
  for (std::size_t i = 0; i < X.size(); ++i) pts.push_back(X.z(i)[0]);
  std::sort(pts.begin(), pts.end());
  const auto n = static_cast<std::int64_t>(std::ceil(T / h_z));
  const double dz = T / static_cast<double>(n);
  std::complex<double> integral = 0.0;
  for (std::int64_t j = -n; j <= n; ++j) {
    const double z = static_cast<double>(j) * dz;
    const double w = (j == -n || j == n) ? 0.5 : 1.0;
    double s = 0.0;
    for (auto it = std::lower_bound(pts.begin(), pts.end(), z - a); it != pts.end() && *it <= z + a; ++it) {
      const double u = *it - z;
      s += psi.f(std::span<const double>(&u, 1));
    }
    if (s != 0.0) integral += w * s * std::conj(xi(std::span<const double>(&z, 1)));
  }
  out.lhs = integral * dz / (2.0 * T) * phi_sum;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace quasilat
