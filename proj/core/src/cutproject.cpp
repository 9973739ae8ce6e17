#include "quasilat/cutproject.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "format.hpp"
#include "quasilat/error.hpp"
#include "quasilat/parallel.hpp"

namespace quasilat {
namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// a + b√d with |x| ≤ T and lo ≤ x* ≤ hi, all comparisons exact.
std::vector<QuadInt> silver_points(double T, const Interval& w, std::int64_t d) {
  const double root = std::sqrt(static_cast<double>(d));
  const auto b_lo = static_cast<std::int64_t>(std::floor((-T - w.hi) / (2.0 * root))) - 1;
  const auto b_hi = static_cast<std::int64_t>(std::ceil((T - w.lo) / (2.0 * root))) + 1;
  std::vector<QuadInt> out;
  for (std::int64_t b = b_lo; b <= b_hi; ++b) {
    const double shift = static_cast<double>(b) * root;
    const double lo = std::max(-T - shift, w.lo + shift);
    const double hi = std::min(T - shift, w.hi + shift);
    if (lo > hi + 2.0) continue;
    for (auto a = static_cast<std::int64_t>(std::floor(lo)) - 1; a <= static_cast<std::int64_t>(std::ceil(hi)) + 1;
         ++a) {
      const QuadInt x{a, b, d};
      if (!embed_within(x, T)) continue;
      const QuadInt s = star(x);
      if (compare_embed(s, w.lo) < 0 || compare_embed(s, w.hi) > 0) continue;
      out.push_back(x);
    }
  }
  return out;
}

PointPatch generate_silver(const CutProjectScheme& scheme, double T) {
  const std::size_t n = scheme.physical_dim;
  std::vector<std::vector<QuadInt>> axes(n);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    axes[i] = silver_points(T, scheme.window[i], scheme.radicand);
    total *= axes[i].size();
  }
  PatchBuilder b(CentralExtensionGroup::abelian(n), true);
  std::vector<QuadInt> e(n);
  std::vector<double> c(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = axes[i][rem % axes[i].size()];
      rem /= axes[i].size();
      c[i] = e[i].embed();
    }
    b.add({}, c, e);
  }
  std::string prov = "silver(d=" + std::to_string(scheme.radicand) + ",W=";
  for (std::size_t i = 0; i < n; ++i) {
    prov += (i ? "x[" : "[") + detail::num(scheme.window[i].lo) + "," + detail::num(scheme.window[i].hi) + "]";
  }
  return std::move(b).build({T, 0.0}, {T, 0.0}, prov + ",T=" + detail::num(T) + ")");
}

PointPatch generate_matrix(const CutProjectScheme& scheme, double T) {
  const std::size_t p = scheme.physical_dim;
  const std::size_t n = p + scheme.internal_dim;
  Eigen::MatrixXd B(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) B(r, c) = scheme.basis[r * n + c];
  const Eigen::MatrixXd Binv = B.inverse();
  Eigen::VectorXd extent(n);
  for (std::size_t r = 0; r < n; ++r) {
    extent(r) = r < p ? T : std::max(std::abs(scheme.window[r - p].lo), std::abs(scheme.window[r - p].hi));
  }
  std::vector<std::int64_t> lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double bound = Binv.row(j).cwiseAbs().dot(extent);
    hi[j] = static_cast<std::int64_t>(std::floor(bound + 1e-9));
    lo[j] = -hi[j];
  }
  const double slack_phys = 1e-12 * std::max(1.0, T);
  PatchBuilder b(CentralExtensionGroup::abelian(p), false);
  std::vector<std::int64_t> k(lo);
  Eigen::VectorXd kv(n);
  std::vector<double> phys(p);
  while (true) {
    for (std::size_t j = 0; j < n; ++j) kv(j) = static_cast<double>(k[j]);
    const Eigen::VectorXd x = B * kv;
    bool keep = true;
    for (std::size_t r = 0; r < n && keep; ++r) {
      if (r < p) {
        keep = std::abs(x(r)) <= T + slack_phys;
      } else {
        const Interval& w = scheme.window[r - p];
        const double s = 1e-12 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});
        keep = x(r) >= w.lo - s && x(r) <= w.hi + s;
      }
    }
    if (keep) {
      for (std::size_t r = 0; r < p; ++r) phys[r] = std::clamp(x(r), -T, T);
      b.add({}, phys);
    }
    std::size_t j = 0;
    while (j < n && k[j] == hi[j]) {
      k[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++k[j];
  }
  return std::move(b).build({T, 0.0}, {T, 0.0}, "matrix(T=" + detail::num(T) + ")");
}

PointPatch to_central(const PointPatch& P, std::size_t dim_z) {
  const auto& G = P.group();
  if (G.dim_q() == 0 && G.dim_z() == dim_z) return P;
  if (G.dim_z() == 0 && G.dim_q() == dim_z) return as_central(P);
  throw Error(ErrorKind::kDimensionMismatch, "Xi must be a patch in a space of dimension dim_z");
}

}  // namespace

CutProjectScheme CutProjectScheme::silver(double R, std::size_t dim, std::int64_t d) {
  CutProjectScheme s;
  s.kind = Kind::kSilver;
  s.physical_dim = s.internal_dim = dim;
  s.window.assign(dim, Interval{-R, R});
  s.radicand = d;
  s.validate();
  return s;
}

CutProjectScheme CutProjectScheme::matrix(std::size_t physical_dim, std::size_t internal_dim,
                                          std::vector<double> basis, std::vector<Interval> window) {
  CutProjectScheme s;
  s.kind = Kind::kMatrix;
  s.physical_dim = physical_dim;
  s.internal_dim = internal_dim;
  s.basis = std::move(basis);
  s.window = std::move(window);
  s.validate();
  return s;
}

void CutProjectScheme::validate() const {
  if (physical_dim == 0) throw Error(ErrorKind::kInvalidArgument, "physical_dim must be ≥ 1");
  if (window.size() != internal_dim) {
    throw Error(ErrorKind::kDimensionMismatch, "window needs one interval per internal dimension");
  }
  for (const auto& w : window) {
    if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || !(w.lo < w.hi)) {
      throw Error(ErrorKind::kDegenerateWindow,
                  "window interval [" + detail::num(w.lo) + ", " + detail::num(w.hi) + "] has empty interior");
    }
  }
  if (kind == Kind::kSilver) {
    if (physical_dim != internal_dim) {
      throw Error(ErrorKind::kDimensionMismatch, "silver scheme needs physical_dim == internal_dim");
    }
    if (radicand < 2) throw Error(ErrorKind::kInvalidArgument, "radicand must be ≥ 2");
    const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(radicand))));
    if (r * r == radicand) throw Error(ErrorKind::kInvalidArgument, "radicand must not be a perfect square");
    return;
  }
  const std::size_t n = physical_dim + internal_dim;
  if (basis.size() != n * n) {
    throw Error(ErrorKind::kDimensionMismatch, "basis needs " + std::to_string(n * n) + " entries");
  }
  Eigen::MatrixXd B(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) B(r, c) = basis[r * n + c];
  if (Eigen::FullPivLU<Eigen::MatrixXd>(B).rank() < static_cast<Eigen::Index>(n)) {
    throw Error(ErrorKind::kInvalidArgument, "lattice basis is singular");
  }
}

PointPatch generate_model_set(const CutProjectScheme& scheme, double T) {
  scheme.validate();
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::kInvalidArgument, "T must be positive");
  return scheme.kind == CutProjectScheme::Kind::kSilver ? generate_silver(scheme, T) : generate_matrix(scheme, T);
}

PointPatch integer_lattice(std::size_t dim, double radius) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "dimension must be ≥ 1");
  if (!(radius >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "radius must be nonnegative");
  const auto r = static_cast<std::int64_t>(std::floor(radius));
  const auto side = static_cast<std::size_t>(2 * r + 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= side;
  PatchBuilder b(CentralExtensionGroup::abelian(dim), true);
  std::vector<double> c(dim);
  std::vector<QuadInt> e(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t i = 0; i < dim; ++i) {
      const auto v = static_cast<std::int64_t>(rem % side) - r;
      rem /= side;
      c[i] = static_cast<double>(v);
      e[i] = QuadInt::integer(v);
    }
    b.add({}, c, e);
  }
  return std::move(b).build({radius, 0.0}, {radius, 0.0},
                            "integer_lattice(dim=" + std::to_string(dim) + ",r=" + detail::num(radius) + ")");
}

PointPatch heisenberg_integer_lattice(double q_radius, double z_radius) {
  if (!(q_radius >= 0.0) || !(z_radius >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "radii must be nonnegative");
  const auto nq = static_cast<std::int64_t>(std::floor(q_radius));
  const auto nz = static_cast<std::int64_t>(std::floor(z_radius));
  PatchBuilder b(CentralExtensionGroup::heisenberg(), true);
  for (std::int64_t z = -nz; z <= nz; ++z) {
    for (std::int64_t x = -nq; x <= nq; ++x) {
      for (std::int64_t y = -nq; y <= nq; ++y) {
        b.add(ExactElement{{QuadInt::integer(z)}, {QuadInt::integer(x), QuadInt::integer(y)}});
      }
    }
  }
  return std::move(b).build({q_radius, z_radius}, {q_radius, z_radius},
                            "heisenberg_integer(q=" + detail::num(q_radius) + ",z=" + detail::num(z_radius) + ")");
}

SymplecticProduct symplectic_product(const PointPatch& xi_in, const PointPatch& delta, const CentralExtensionGroup& G,
                                     int k, const SymplecticOptions& options) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be ≥ 1");
  const PointPatch xi = to_central(xi_in, G.dim_z());
  if (delta.group().dim_z() != 0 || delta.group().dim_q() != G.dim_q()) {
    throw Error(ErrorKind::kDimensionMismatch, "Delta must be a patch in a space of dimension dim_q");
  }
  if (xi.empty() || delta.empty()) throw Error(ErrorKind::kEmptyPatch, "symplectic product of an empty patch");
  const std::size_t dz = G.dim_z(), dq = G.dim_q();
  const bool exact = xi.has_exact() && delta.has_exact() && G.cocycle().is_integral() &&
                     (xi.radicand() == delta.radicand());

  PatchBuilder b(G, exact);
  std::vector<QuadInt> e(exact ? dz + dq : 0);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
      if (exact) {
        std::copy_n(xi.exact(i).begin(), dz, e.begin());
        std::copy_n(delta.exact(j).begin(), dq, e.begin() + static_cast<std::ptrdiff_t>(dz));
      }
      b.add(xi.z(i), delta.q(j), e);
    }
  }

  SymplecticProduct out;
  out.condition_holds = true;
  if (options.check_condition) {
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < delta.size(); ++j)
      if (sup_norm(delta.q(j)) <= options.check_radius) ids.push_back(j);
    PatchBuilder sub(delta.group(), delta.has_exact());
    for (auto j : ids) sub.add({}, delta.q(j), delta.exact(j));
    const PointPatch d1 = std::move(sub).build(delta.window(), delta.window(), delta.provenance());
    const PointPatch d2 = minkowski(d1, d1);

    PointIndex values(dz, exact);
    std::vector<std::vector<double>> float_values;
    std::vector<std::vector<QuadInt>> exact_values;
    std::vector<double> v(dz);
    std::vector<QuadInt> ve(exact ? dz : 0);
    for (std::size_t s = 0; s < d2.size(); ++s) {
      for (std::size_t t = 0; t < d1.size(); ++t) {
        std::fill(v.begin(), v.end(), 0.0);
        G.cocycle().accumulate(d2.q(s), d1.q(t), v);
        if (exact) {
          std::fill(ve.begin(), ve.end(), QuadInt{0, 0, xi.radicand()});
          G.cocycle().accumulate_exact(d2.exact(s), d1.exact(t), ve);
          for (std::size_t i = 0; i < dz; ++i) v[i] = ve[i].embed();
        }
        if (values.insert(v, ve).second) {
          float_values.push_back(v);
          if (exact) exact_values.push_back(ve);
          out.max_value = std::max(out.max_value, sup_norm(v));
        }
      }
    }
    out.values_checked = float_values.size();

    PointPatch power = xi;
    for (int j = 2; j <= k; ++j) {
      power = minkowski(power, xi);
      const double keep = out.max_value + static_cast<double>(k - j) * xi.window().z;
      power = crop(power, {0.0, keep});
    }
    if (power.core().z + 1e-12 < out.max_value) {
      const double factor = std::ldexp(1.0, k - 1);
      throw Error(ErrorKind::kInsufficientWindow,
                  "core of Xi^" + std::to_string(k) + " is " + detail::num(power.core().z) + " but beta values reach " +
                      detail::num(out.max_value) + "; Xi window needs z ≥ " + detail::num(out.max_value * factor));
    }
    for (std::size_t i = 0; i < float_values.size() && out.condition_holds; ++i) {
      const bool found = exact ? power.find(float_values[i], exact_values[i]).has_value()
                               : power.find(float_values[i]).has_value();
      out.condition_holds = found;
    }
  }

  std::string prov = "symplectic_product(Xi=" + xi.provenance() + ",Delta=" + delta.provenance() +
                     ",k=" + std::to_string(k) + ")";
  if (options.check_condition) prov += out.condition_holds ? "[condition holds]" : "[condition fails]";
  out.patch = std::move(b).build({delta.window().q, xi.window().z}, {delta.core().q, xi.core().z}, prov);
  return out;
}

PointPatch project(const PointPatch& P) {
  const auto& G = P.group();
  const std::size_t dz = G.dim_z();
  PatchBuilder b(CentralExtensionGroup::abelian(G.dim_q()), P.has_exact());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto e = P.exact(i);
    b.add({}, P.q(i), e.empty() ? e : e.subspan(dz));
  }
  return std::move(b).build({P.window().q, 0.0}, {P.core().q, 0.0}, "project(" + P.provenance() + ")");
}

FiberIndex::FiberIndex(const PointPatch& P) : P_(&P), index_(P.group().dim_q(), P.has_exact()) {
  const std::size_t dz = P.group().dim_z();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto e = P.exact(i);
    const auto eq = e.empty() ? e : e.subspan(dz);
    auto [id, inserted] = index_.insert(P.q(i), eq);
    if (inserted) {
      Column c;
      c.delta.assign(P.q(i).begin(), P.q(i).end());
      c.exact_delta.assign(eq.begin(), eq.end());
      columns_.push_back(std::move(c));
    }
    columns_[id].ids.push_back(i);
  }
}

std::optional<std::size_t> FiberIndex::find(std::span<const double> delta, std::span<const QuadInt> exact_delta) const {
  if (index_.exact() && exact_delta.empty()) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      bool match = true;
      for (std::size_t i = 0; i < delta.size() && match; ++i)
        match = std::abs(columns_[c].delta[i] - delta[i]) <= kMatchTolerance;
      if (match) return c;
    }
    return std::nullopt;
  }
  return index_.find(delta, exact_delta);
}

PointPatch FiberIndex::fiber(std::size_t column) const {
  const auto& G = P_->group();
  PatchBuilder b(CentralExtensionGroup::central(G.dim_z()), P_->has_exact());
  for (auto id : columns_[column].ids) {
    const auto e = P_->exact(id);
    b.add(P_->z(id), {}, e.empty() ? e : e.first(G.dim_z()));
  }
  return std::move(b).build({0.0, P_->window().z}, {0.0, P_->core().z}, "fiber(" + P_->provenance() + ")");
}

bool FiberIndex::column_in_core(std::size_t column, double slack) const {
  return sup_norm(columns_[column].delta) <= P_->core().q + slack;
}

PointPatch fiber(const PointPatch& P, std::span<const double> delta, std::span<const QuadInt> exact_delta) {
  if (delta.size() != P.group().dim_q()) throw Error(ErrorKind::kDimensionMismatch, "delta has wrong dimension");
  const FiberIndex index(P);
  if (auto c = index.find(delta, exact_delta)) return index.fiber(*c);
  PatchBuilder b(CentralExtensionGroup::central(P.group().dim_z()), P.has_exact());
  return std::move(b).build({0.0, P.window().z}, {0.0, P.core().z}, "fiber(" + P.provenance() + ")");
}

AlignmentReport alignment_report(const PointPatch& P, double R, const AlignmentOptions& options) {
  if (!(R > 0.0)) throw Error(ErrorKind::kInvalidArgument, "R_threshold must be positive");
  if (!(options.probe_step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "probe_step must be positive");
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "alignment report of an empty patch");
  const auto& G = P.group();
  AlignmentReport report;
  report.R_threshold = R;
  report.z_region = options.z_region < 0.0 ? P.core().z : options.z_region;
  if (G.dim_z() > 0 && !(P.core().z > 0.0)) {
    throw Error(ErrorKind::kInsufficientWindow, "patch has no z-core to probe fibers on");
  }
  const PointPatch proj = project(P);
  report.projection_min_gap = min_gap(proj, proj.core());

  const FiberIndex index(P);
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < index.columns().size(); ++c)
    if (index.column_in_core(c)) cols.push_back(c);
  report.fibers.resize(cols.size());
  parallel_chunks(cols.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto& col = index.columns()[cols[r]];
      FiberReport& f = report.fibers[r];
      f.delta = col.delta;
      f.cardinality = col.ids.size();
      f.covering_estimate = covering_radius(index.fiber(cols[r]), {0.0, report.z_region}, options.probe_step).value;
      f.essential = f.covering_estimate <= R;
    }
  });
  std::size_t essential = 0;
  for (const auto& f : report.fibers) essential += f.essential ? 1 : 0;
  report.uniformly_large = !report.fibers.empty() && essential == report.fibers.size();
  report.essential_fraction =
      report.fibers.empty() ? 0.0 : static_cast<double>(essential) / static_cast<double>(report.fibers.size());
  return report;
}

PointPatch enforce_uniform_fibers(const PointPatch& P, double R, const AlignmentOptions& options) {
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "enforce_uniform_fibers of an empty patch");
  if (!contains_identity(P) || !is_symmetric(P)) {
    throw Error(ErrorKind::kInvalidArgument, "enforce_uniform_fibers needs a symmetric patch containing e");
  }
  const PointPatch full = minkowski(P, P);
  const PointPatch P2 = crop(full, full.core());
  const AlignmentReport report = alignment_report(P2, R, options);
  const FiberIndex index(P2);
  PatchBuilder b(P2.group(), P2.has_exact());
  std::size_t kept = 0;
  for (const auto& f : report.fibers) {
    if (!f.essential) continue;
    ++kept;
    const auto c = index.find(f.delta);
    for (auto id : index.columns()[*c].ids) b.add(P2.z(id), P2.q(id), P2.exact(id));
  }
  if (kept == 0) {
    throw Error(ErrorKind::kThresholdTooSmall,
                "no fiber of P^2 is " + detail::num(R) + "-relatively dense on the z-region " +
                    detail::num(report.z_region));
  }
  return std::move(b).build(P2.window(), P2.core(), "uniform(R=" + detail::num(R) + "," + P.provenance() + ")");
}

std::vector<FiberProfileRow> fiber_cardinality_profile(const PointPatch& P, int k_max) {
  if (k_max < 1) throw Error(ErrorKind::kInvalidArgument, "k_max must be ≥ 1");
  if (P.empty()) throw Error(ErrorKind::kEmptyPatch, "fiber profile of an empty patch");
  std::vector<FiberProfileRow> rows;
  PointPatch power = P;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) power = minkowski(power, P);
    const FiberIndex index(power);
    FiberProfileRow row;
    row.k = k;
    row.core = power.core();
    for (std::size_t c = 0; c < index.columns().size(); ++c) {
      if (!index.column_in_core(c)) continue;
      std::size_t count = 0;
      for (auto id : index.columns()[c].ids) count += power.in_box(id, power.core(), 1e-12) ? 1 : 0;
      if (count == 0) continue;
      ++row.columns;
      row.max_cardinality = std::max(row.max_cardinality, count);
    }
    if (row.columns == 0) {
      throw Error(ErrorKind::kInsufficientWindow,
                  "core of P^" + std::to_string(k) + " holds no points; enlarge the window by 2^" +
                      std::to_string(k_max - k + 1));
    }
    rows.push_back(row);
  }
  return rows;
}

PointPatch replace_fiber(const PointPatch& P, std::span<const double> delta,
                         const std::vector<std::vector<double>>& zs) {
  const auto& G = P.group();
  if (delta.size() != G.dim_q()) throw Error(ErrorKind::kDimensionMismatch, "delta has wrong dimension");
  const FiberIndex index(P);
  const auto col = index.find(delta);
  std::vector<QuadInt> exact_delta;
  bool exact = P.has_exact();
  if (exact) {
    if (col) {
      exact_delta = index.columns()[*col].exact_delta;
    } else {
      for (double v : delta) {
        if (v != std::round(v)) exact = false;
        exact_delta.push_back(QuadInt::integer(static_cast<std::int64_t>(v), P.radicand()));
      }
    }
    for (const auto& z : zs)
      for (double v : z) exact = exact && v == std::round(v);
  }
  PatchBuilder b(G, exact);
  for (std::size_t i = 0; i < P.size(); ++i) {
    bool in_col = false;
    if (col) {
      const auto& ids = index.columns()[*col].ids;
      in_col = std::binary_search(ids.begin(), ids.end(), i);
    }
    if (!in_col) b.add(P.z(i), P.q(i), exact ? P.exact(i) : std::span<const QuadInt>{});
  }
  const std::vector<double> q(delta.begin(), delta.end());
  std::vector<QuadInt> e;
  for (const auto& z : zs) {
    if (z.size() != G.dim_z()) throw Error(ErrorKind::kDimensionMismatch, "fiber point has wrong dimension");
    e.clear();
    if (exact) {
      for (double v : z) e.push_back(QuadInt::integer(static_cast<std::int64_t>(v), P.radicand()));
      e.insert(e.end(), exact_delta.begin(), exact_delta.end());
    }
    b.add(z, q, e);
  }
  return std::move(b).build(P.window(), P.core(), "replace_fiber(" + P.provenance() + ")");
}

}  // namespace quasilat
