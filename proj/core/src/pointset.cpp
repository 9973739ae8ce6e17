#include "quasilat/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "format.hpp"
#include "quasilat/error.hpp"
#include "search.hpp"

namespace quasilat {
namespace {

constexpr double kWindowSlack = 1e-9;

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void require_same_group(const PointPatch& a, const PointPatch& b) {
  if (!(a.group() == b.group())) {
    throw Error(ErrorKind::kDimensionMismatch, "patches live in different groups");
  }
}

Radii min_radii(const Radii& a, const Radii& b) { return {std::min(a.q, b.q), std::min(a.z, b.z)}; }

}  // namespace

GroupElement PointPatch::element(std::size_t i) const {
  const auto zz = z(i);
  const auto qq = q(i);
  return {std::vector<double>(zz.begin(), zz.end()), std::vector<double>(qq.begin(), qq.end())};
}

std::span<const QuadInt> PointPatch::exact(std::size_t i) const {
  if (!has_exact_) return {};
  return {exact_.data() + i * dim(), dim()};
}

ExactElement PointPatch::exact_element(std::size_t i) const {
  if (!has_exact_) throw Error(ErrorKind::kInvalidArgument, "patch has no exact coordinates");
  const auto e = exact(i);
  return {std::vector<QuadInt>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(group_.dim_z())),
          std::vector<QuadInt>(e.begin() + static_cast<std::ptrdiff_t>(group_.dim_z()), e.end())};
}

std::optional<std::size_t> PointPatch::find(std::span<const double> c,
                                            std::span<const QuadInt> e) const {
  if (!index_) return std::nullopt;
  return index_->find(c, e);
}

bool PointPatch::contains(const GroupElement& g) const {
  check_dims(group_, g);
  if (has_exact_) {
    throw Error(ErrorKind::kInvalidArgument, "exact patch membership needs exact coordinates");
  }
  std::vector<double> c(g.z);
  c.insert(c.end(), g.q.begin(), g.q.end());
  return find(c).has_value();
}

bool PointPatch::contains(const ExactElement& g) const {
  if (!has_exact_) return contains(g.to_float());
  std::vector<QuadInt> e(g.z);
  e.insert(e.end(), g.q.begin(), g.q.end());
  return find({}, e).has_value();
}

bool PointPatch::in_box(std::size_t i, const Radii& box, double slack) const {
  return sup_norm(q(i)) <= box.q + slack && sup_norm(z(i)) <= box.z + slack;
}

PatchBuilder::PatchBuilder(CentralExtensionGroup group, bool exact, double tolerance)
    : group_(std::move(group)), exact_(exact), tolerance_(tolerance), index_(group_.dim(), exact, tolerance) {}

bool PatchBuilder::add(std::span<const double> z, std::span<const double> q,
                       std::span<const QuadInt> exact) {
  if (z.size() != group_.dim_z() || q.size() != group_.dim_q()) {
    throw Error(ErrorKind::kDimensionMismatch, "point dimensions do not match the patch group");
  }
  std::vector<double> c(z.begin(), z.end());
  c.insert(c.end(), q.begin(), q.end());
  if (exact_) {
    if (exact.size() != group_.dim()) {
      throw Error(ErrorKind::kDimensionMismatch, "exact patch point lacks exact coordinates");
    }
    for (const auto& x : exact) {
      if (radicand_ == 0) radicand_ = x.d;
      if (x.d != radicand_) throw Error(ErrorKind::kRadicandMismatch, "mixed radicands in one patch");
    }
  }
  auto [id, inserted] = index_.insert(c, exact);
  if (inserted) {
    coords_.insert(coords_.end(), c.begin(), c.end());
    if (exact_) exact_coords_.insert(exact_coords_.end(), exact.begin(), exact.end());
  }
  return inserted;
}

bool PatchBuilder::add(const GroupElement& g) { return add(g.z, g.q); }

bool PatchBuilder::add(const ExactElement& g) {
  const GroupElement f = g.to_float();
  std::vector<QuadInt> e(g.z);
  e.insert(e.end(), g.q.begin(), g.q.end());
  return add(f.z, f.q, e);
}

PointPatch PatchBuilder::build(Radii window, Radii core, std::string provenance) && {
  if (group_.dim_q() == 0) window.q = core.q = 0.0;
  if (group_.dim_z() == 0) window.z = core.z = 0.0;
  if (window.q < 0 || window.z < 0 || core.q < 0 || core.z < 0) {
    throw Error(ErrorKind::kInvalidArgument, "window and core radii must be nonnegative");
  }
  if (core.q > window.q + kWindowSlack || core.z > window.z + kWindowSlack) {
    throw Error(ErrorKind::kInvalidArgument, "core exceeds window");
  }
  const std::size_t dim = group_.dim();
  const std::size_t n = index_.size();
  const std::size_t dz = group_.dim_z();
  std::vector<double> gauges(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> c(coords_.data() + i * dim, dim);
    if (sup_norm(c.first(dz)) > window.z + kWindowSlack || sup_norm(c.subspan(dz)) > window.q + kWindowSlack) {
      throw Error(ErrorKind::kInvalidArgument, "point outside declared window (" + provenance + ")");
    }
    gauges[i] = gauge(group_, c.first(dz), c.subspan(dz));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (gauges[a] != gauges[b]) return gauges[a] < gauges[b];
    const double* pa = coords_.data() + a * dim;
    const double* pb = coords_.data() + b * dim;
    for (std::size_t k = 0; k < dim; ++k)
      if (pa[k] != pb[k]) return pa[k] > pb[k];
    return a < b;
  });

  PointPatch P;
  P.group_ = group_;
  P.count_ = n;
  P.window_ = window;
  P.core_ = core;
  P.provenance_ = std::move(provenance);
  P.has_exact_ = exact_;
  P.radicand_ = exact_ ? (radicand_ == 0 ? 2 : radicand_) : 0;
  P.coords_.resize(n * dim);
  if (exact_) P.exact_.resize(n * dim);
  auto index = std::make_shared<PointIndex>(dim, exact_, tolerance_);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    std::copy_n(coords_.data() + i * dim, dim, P.coords_.data() + r * dim);
    if (exact_) std::copy_n(exact_coords_.data() + i * dim, dim, P.exact_.data() + r * dim);
    index->insert(std::span<const double>(P.coords_.data() + r * dim, dim),
                  exact_ ? std::span<const QuadInt>(P.exact_.data() + r * dim, dim)
                         : std::span<const QuadInt>{});
  }
  P.index_ = std::move(index);
  return P;
}

PointPatch as_central(const PointPatch& P) {
  const auto& G = P.group();
  if (G.dim_q() == 0) return P;
  if (G.dim_z() != 0 || !G.is_abelian()) {
    throw Error(ErrorKind::kInvalidArgument, "as_central needs a plain abelian patch (dim_z = 0)");
  }
  PatchBuilder b(CentralExtensionGroup::central(G.dim_q()), P.has_exact());
  for (std::size_t i = 0; i < P.size(); ++i) b.add(P.q(i), {}, P.exact(i));
  return std::move(b).build({0.0, P.window().q}, {0.0, P.core().q}, P.provenance());
}

PointPatch as_horizontal(const PointPatch& P) {
  const auto& G = P.group();
  if (G.dim_z() == 0) return P;
  if (G.dim_q() != 0) {
    throw Error(ErrorKind::kInvalidArgument, "as_horizontal needs a central abelian patch (dim_q = 0)");
  }
  PatchBuilder b(CentralExtensionGroup::abelian(G.dim_z()), P.has_exact());
  for (std::size_t i = 0; i < P.size(); ++i) b.add({}, P.z(i), P.exact(i));
  return std::move(b).build({P.window().z, 0.0}, {P.core().z, 0.0}, P.provenance());
}

bool is_symmetric(const PointPatch& P) {
  const auto& G = P.group();
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P.has_exact()) {
      if (!P.contains(inv(G, P.exact_element(i)))) return false;
    } else if (!P.contains(inv(G, P.element(i)))) {
      return false;
    }
  }
  return true;
}

bool contains_identity(const PointPatch& P) {
  const std::vector<double> zero(P.dim(), 0.0);
  if (P.has_exact()) {
    const std::vector<QuadInt> e(P.dim(), QuadInt{0, 0, P.radicand()});
    return P.find(zero, e).has_value();
  }
  return P.find(zero).has_value();
}

PointPatch minkowski(const PointPatch& P1, const PointPatch& P2) {
  require_same_group(P1, P2);
  const auto& G = P1.group();
  const bool exact = P1.has_exact() && P2.has_exact() && G.cocycle().is_integral();
  const std::size_t dz = G.dim_z();
  const std::size_t dq = G.dim_q();
  PatchBuilder b(G, exact);
  std::vector<double> z(dz), q(dq);
  std::vector<QuadInt> e(exact ? G.dim() : 0);
  for (std::size_t i = 0; i < P1.size(); ++i) {
    const auto z1 = P1.z(i);
    const auto q1 = P1.q(i);
    for (std::size_t j = 0; j < P2.size(); ++j) {
      const auto z2 = P2.z(j);
      const auto q2 = P2.q(j);
      for (std::size_t k = 0; k < dz; ++k) z[k] = z1[k] + z2[k];
      for (std::size_t k = 0; k < dq; ++k) q[k] = q1[k] + q2[k];
      G.cocycle().accumulate(q1, q2, z);
      if (exact) {
        const auto e1 = P1.exact(i);
        const auto e2 = P2.exact(j);
        for (std::size_t k = 0; k < G.dim(); ++k) e[k] = quad_add(e1[k], e2[k]);
        G.cocycle().accumulate_exact(e1.subspan(dz), e2.subspan(dz), std::span<QuadInt>(e).first(dz));
        // Exact coordinates drive both identity and the stored floats.
        for (std::size_t k = 0; k < dz; ++k) z[k] = e[k].embed();
        for (std::size_t k = 0; k < dq; ++k) q[k] = e[dz + k].embed();
      }
      b.add(z, q, e);
    }
  }
  const Radii w1 = P1.window(), w2 = P2.window();
  const Radii window{w1.q + w2.q, w1.z + w2.z + G.cocycle().sup_bound() * w1.q * w2.q};
  const Radii core{std::min(P1.core().q, P2.core().q) / 2.0, std::min(P1.core().z, P2.core().z) / 2.0};
  return std::move(b).build(window, core, "(" + P1.provenance() + ")*(" + P2.provenance() + ")");
}

PointPatch inverse_set(const PointPatch& P) {
  const auto& G = P.group();
  PatchBuilder b(G, P.has_exact());
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P.has_exact()) {
      b.add(inv(G, P.exact_element(i)));
    } else {
      b.add(inv(G, P.element(i)));
    }
  }
  return std::move(b).build(P.window(), P.core(), "inv(" + P.provenance() + ")");
}

namespace {

std::pair<Radii, Radii> translated_radii(const CentralExtensionGroup& G, const GroupElement& g,
                                         const PointPatch& P) {
  const double gq = sup_norm(g.q);
  const double gz = sup_norm(g.z);
  const double beta = G.cocycle().sup_bound();
  const Radii window{P.window().q + gq, P.window().z + gz + beta * gq * P.window().q};
  Radii core{std::max(P.core().q - gq, 0.0), 0.0};
  core.z = std::max(P.core().z - gz - beta * gq * core.q, 0.0);
  return {window, core};
}

}  // namespace

PointPatch translate(const GroupElement& g, const PointPatch& P) {
  const auto& G = P.group();
  check_dims(G, g);
  PatchBuilder b(G, false);
  for (std::size_t i = 0; i < P.size(); ++i) b.add(mul(G, g, P.element(i)));
  auto [window, core] = translated_radii(G, g, P);
  return std::move(b).build(window, core, "translate(" + P.provenance() + ")");
}

PointPatch translate(const ExactElement& g, const PointPatch& P) {
  if (!P.has_exact()) return translate(g.to_float(), P);
  const auto& G = P.group();
  PatchBuilder b(G, true);
  for (std::size_t i = 0; i < P.size(); ++i) b.add(mul(G, g, P.exact_element(i)));
  auto [window, core] = translated_radii(G, g.to_float(), P);
  return std::move(b).build(window, core, "translate(" + P.provenance() + ")");
}

PointPatch crop(const PointPatch& P, const Radii& box) {
  PatchBuilder b(P.group(), P.has_exact());
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P.in_box(i, box)) b.add(P.z(i), P.q(i), P.exact(i));
  }
  return std::move(b).build(min_radii(P.window(), box), min_radii(P.core(), box),
                            "crop(" + P.provenance() + ")");
}

double min_gap(const PointPatch& P) {
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "min_gap of an empty patch");
  return min_gap(P, {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()});
}

double min_gap(const PointPatch& P, const Radii& region) {
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "min_gap of an empty patch");
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P.in_box(i, region, 1e-12)) ids.push_back(i);
  return detail::SweepSearch(P, ids).min_pair_distance();
}

CoveringEstimate covering_radius(const PointPatch& P, const Radii& region, double h) {
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "covering radius of an empty patch");
  if (!(h > 0.0)) throw Error(ErrorKind::kInvalidArgument, "probe spacing h must be positive");
  const auto& G = P.group();
  const std::size_t dz = G.dim_z(), dq = G.dim_q();
  const double rq = dq ? region.q : 0.0;
  const double rz = dz ? region.z : 0.0;
  if (rq > P.core().q + 1e-12 || rz > P.core().z + 1e-12) {
    throw Error(ErrorKind::kBoundaryUnsound,
                "probe region (q " + detail::num(rq) + ", z " + detail::num(rz) + ") exceeds core (q " +
                    detail::num(P.core().q) + ", z " + detail::num(P.core().z) + ")");
  }
  auto axis = [h](double r) {
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * r / h - 1e-9)) + 1;
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = n == 1 ? 0.0 : -r + 2.0 * r * static_cast<double>(i) / static_cast<double>(n - 1);
    return pts;
  };
  const auto az = axis(rz);
  const auto aq = axis(rq);
  const double sz = az.size() > 1 ? az[1] - az[0] : 0.0;
  const double sq = aq.size() > 1 ? aq[1] - aq[0] : 0.0;

  CoveringEstimate est;
  if (G.is_abelian()) {
    est.slack = std::sqrt(static_cast<double>(dz) * sz * sz + static_cast<double>(dq) * sq * sq) / 2.0;
  } else {
    const double half_q = std::sqrt(static_cast<double>(dq)) * sq / 2.0;
    const double half_z = std::sqrt(static_cast<double>(dz)) * sz / 2.0;
    const double shear = G.cocycle().euclid_bound() * std::sqrt(static_cast<double>(dq)) * rq * half_q;
    est.slack = std::max(half_q, std::sqrt(half_z + shear));
  }

  std::vector<std::size_t> ids(P.size());
  std::iota(ids.begin(), ids.end(), 0);
  const detail::SweepSearch search(P, ids);

  const std::size_t dim = dz + dq;
  std::vector<std::size_t> counter(dim, 0);
  std::vector<std::size_t> extent(dim);
  for (std::size_t k = 0; k < dz; ++k) extent[k] = az.size();
  for (std::size_t k = 0; k < dq; ++k) extent[dz + k] = aq.size();
  std::size_t total = 1;
  for (auto e : extent) total *= e;
  std::vector<double> probe(dim);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t c = rem % extent[k];
      rem /= extent[k];
      probe[k] = k < dz ? az[c] : aq[c];
    }
    worst = std::max(worst, search.nearest(probe).second);
  }
  est.grid_max = worst;
  est.probes = total;
  est.value = worst + est.slack;
  return est;
}

MeyerReport check_meyerian(const PointPatch& P, int k_max, double threshold) {
  if (k_max < 1) throw Error(ErrorKind::kInvalidArgument, "k_max must be ≥ 1");
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "check_meyerian of an empty patch");
  MeyerReport report;
  report.threshold = threshold;
  report.pass = true;
  const PointPatch D = minkowski(inverse_set(P), P);
  PointPatch Dk = D;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) Dk = minkowski(Dk, D);
    MeyerLevel level;
    level.k = k;
    level.core = Dk.core();
    level.size = Dk.size();
    for (std::size_t i = 0; i < Dk.size(); ++i)
      if (Dk.in_box(i, Dk.core(), 1e-12)) ++level.core_size;
    if (level.core_size < 2) {
      const double factor = std::ldexp(1.0, k_max - k + 1);
      throw Error(ErrorKind::kInsufficientWindow,
                  "core of D^" + std::to_string(k) + " holds fewer than two points; window needs q ≥ " +
                      detail::num(P.window().q * factor) + ", z ≥ " + detail::num(P.window().z * factor));
    }
    level.min_gap = min_gap(Dk, Dk.core());
    level.pass = level.min_gap > threshold;
    report.levels.push_back(level);
    report.usable_core = Dk.core();
    if (!level.pass) {
      report.pass = false;
      break;
    }
  }
  return report;
}

CoverReport approximate_group_cover(const PointPatch& P) {
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "cover of an empty patch");
  if (!contains_identity(P) || !is_symmetric(P)) {
    throw Error(ErrorKind::kInvalidArgument, "approximate_group_cover needs a symmetric patch containing e");
  }
  const auto& G = P.group();
  const PointPatch P2 = minkowski(P, P);
  std::vector<std::size_t> ids(P.size());
  std::iota(ids.begin(), ids.end(), 0);
  const detail::SweepSearch search(P, ids);
  const bool exact = P.has_exact() && G.cocycle().is_integral();
  PointIndex translators(G.dim(), exact, 1e-6);
  CoverReport report;
  const double reach = std::max(P.core().q, P.core().z);
  for (std::size_t i = 0; i < P2.size(); ++i) {
    if (!P2.in_box(i, P2.core(), 1e-12)) continue;
    ++report.covered;
    const auto [x, dist] = search.nearest(P2.coords(i));
    if (dist > reach) {
      throw Error(ErrorKind::kInsufficientWindow,
                  "no point of P within its core reaches P² point at gauge distance " + detail::num(dist));
    }
    if (exact) {
      const ExactElement f = mul(G, inv(G, P.exact_element(x)), P2.exact_element(i));
      std::vector<QuadInt> key(f.z);
      key.insert(key.end(), f.q.begin(), f.q.end());
      const GroupElement ff = f.to_float();
      std::vector<double> c(ff.z);
      c.insert(c.end(), ff.q.begin(), ff.q.end());
      if (translators.insert(c, key).second) {
        report.exact_translators.push_back(f);
        report.translators.push_back(ff);
        report.max_translator_gauge = std::max(report.max_translator_gauge, gauge(G, ff));
      }
    } else {
      const GroupElement f = mul(G, inv(G, P.element(x)), P2.element(i));
      std::vector<double> c(f.z);
      c.insert(c.end(), f.q.begin(), f.q.end());
      if (translators.insert(c).second) {
        report.translators.push_back(f);
        report.max_translator_gauge = std::max(report.max_translator_gauge, gauge(G, f));
      }
    }
  }
  return report;
}

}  // namespace quasilat
