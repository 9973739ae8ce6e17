#include "quasilat/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "format.hpp"
#include "json.hpp"
#include "quasilat/error.hpp"

namespace quasilat {
namespace {

using nlohmann::ordered_json;

ordered_json numbers(std::span<const double> v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(round12(x));
  return a;
}

ordered_json quads(std::span<const QuadInt> v) {
  ordered_json a = ordered_json::array();
  for (const auto& x : v) a.push_back({x.a, x.b, x.d});
  return a;
}

std::string dump(const ordered_json& j) { return j.dump(1) + "\n"; }

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::kParse, field + ": " + what);
}

void only_keys(const ordered_json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) parse_fail(where + "." + k, "unknown key");
  }
}

const ordered_json& need(const ordered_json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) parse_fail(where + "." + key, "missing");
  return j.at(key);
}

double get_number(const ordered_json& j, const std::string& field) {
  if (!j.is_number()) parse_fail(field, "expected a number");
  return j.get<double>();
}

std::int64_t get_int(const ordered_json& j, const std::string& field) {
  if (!j.is_number_integer()) parse_fail(field, "expected an integer");
  return j.get<std::int64_t>();
}

std::vector<double> get_numbers(const ordered_json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<QuadInt> get_quads(const ordered_json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array");
  std::vector<QuadInt> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 3) parse_fail(f, "expected [a, b, d]");
    out.push_back({get_int(j[i][0], f), get_int(j[i][1], f), get_int(j[i][2], f)});
  }
  return out;
}

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const std::exception& e) {
    parse_fail("json", e.what());
  }
}

ordered_json group_json(const CentralExtensionGroup& G) {
  ordered_json g;
  g["dim_z"] = G.dim_z();
  g["dim_q"] = G.dim_q();
  const Cocycle& c = G.cocycle();
  ordered_json ms = ordered_json::array();
  for (std::size_t i = 0; i < G.dim_z(); ++i) {
    ordered_json m = ordered_json::array();
    for (std::size_t r = 0; r < G.dim_q(); ++r) {
      ordered_json row = ordered_json::array();
      for (std::size_t col = 0; col < G.dim_q(); ++col) row.push_back(round12(c.entry(i, r, col)));
      m.push_back(std::move(row));
    }
    ms.push_back(std::move(m));
  }
  g["matrices"] = std::move(ms);
  return g;
}

CentralExtensionGroup group_of(const ordered_json& g, const std::string& where) {
  only_keys(g, where, {"dim_z", "dim_q", "matrices"});
  const auto dz = get_int(need(g, where, "dim_z"), where + ".dim_z");
  const auto dq = get_int(need(g, where, "dim_q"), where + ".dim_q");
  if (dz < 0 || dq < 0) parse_fail(where, "dimensions must be nonnegative");
  const auto& ms = need(g, where, "matrices");
  const std::string mf = where + ".matrices";
  if (!ms.is_array() || ms.size() != static_cast<std::size_t>(dz)) parse_fail(mf, "expected dim_z matrices");
  std::vector<double> entries;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::string fi = mf + "[" + std::to_string(i) + "]";
    if (!ms[i].is_array() || ms[i].size() != static_cast<std::size_t>(dq)) parse_fail(fi, "expected dim_q rows");
    for (std::size_t r = 0; r < ms[i].size(); ++r) {
      auto row = get_numbers(ms[i][r], fi + "[" + std::to_string(r) + "]");
      if (row.size() != static_cast<std::size_t>(dq)) parse_fail(fi + "[" + std::to_string(r) + "]", "expected dim_q entries");
      entries.insert(entries.end(), row.begin(), row.end());
    }
  }
  try {
    return CentralExtensionGroup(
        Cocycle(static_cast<std::size_t>(dz), static_cast<std::size_t>(dq), std::move(entries)));
  } catch (const Error& e) {
    parse_fail(mf, e.what());
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(detail::num(v).c_str(), nullptr);
}

std::string format_number(double v) { return detail::num(v); }

std::string group_to_json(const CentralExtensionGroup& G) { return dump(group_json(G)); }

CentralExtensionGroup group_from_json(const std::string& text) { return group_of(parse(text), "group"); }

std::string patch_to_json(const PointPatch& P) {
  ordered_json j;
  j["group"] = group_json(P.group());
  j["window_q"] = round12(P.window().q);
  j["window_z"] = round12(P.window().z);
  j["core_q"] = round12(P.core().q);
  j["core_z"] = round12(P.core().z);
  ordered_json pts = ordered_json::array();
  const std::size_t dz = P.group().dim_z();
  for (std::size_t i = 0; i < P.size(); ++i) {
    ordered_json p;
    p["z"] = numbers(P.z(i));
    p["q"] = numbers(P.q(i));
    if (P.has_exact()) {
      const auto e = P.exact(i);
      p["exact"] = {{"z", quads(e.first(dz))}, {"q", quads(e.subspan(dz))}};
    }
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  j["provenance"] = P.provenance();
  return dump(j);
}

PointPatch patch_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  only_keys(j, "patch", {"group", "window_q", "window_z", "core_q", "core_z", "points", "provenance"});
  const CentralExtensionGroup G = group_of(need(j, "patch", "group"), "patch.group");
  const Radii window{get_number(need(j, "patch", "window_q"), "patch.window_q"),
                     get_number(need(j, "patch", "window_z"), "patch.window_z")};
  const Radii core{get_number(need(j, "patch", "core_q"), "patch.core_q"),
                   get_number(need(j, "patch", "core_z"), "patch.core_z")};
  const auto& pts = need(j, "patch", "points");
  if (!pts.is_array()) parse_fail("patch.points", "expected an array");
  std::string provenance;
  if (j.contains("provenance")) {
    if (!j["provenance"].is_string()) parse_fail("patch.provenance", "expected a string");
    provenance = j["provenance"].get<std::string>();
  }
  bool exact = !pts.empty();
  for (const auto& p : pts) exact = exact && p.is_object() && p.contains("exact");
  PatchBuilder b(G, exact);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = "patch.points[" + std::to_string(i) + "]";
    const auto& p = pts[i];
    only_keys(p, where, {"z", "q", "exact"});
    auto z = get_numbers(need(p, where, "z"), where + ".z");
    auto q = get_numbers(need(p, where, "q"), where + ".q");
    std::vector<QuadInt> e;
    if (exact) {
      const auto& ex = p["exact"];
      only_keys(ex, where + ".exact", {"z", "q"});
      e = get_quads(need(ex, where + ".exact", "z"), where + ".exact.z");
      auto eq = get_quads(need(ex, where + ".exact", "q"), where + ".exact.q");
      if (e.size() != z.size() || eq.size() != q.size()) parse_fail(where + ".exact", "dimension mismatch");
      e.insert(e.end(), eq.begin(), eq.end());
      // Floats follow the exact coordinates so a reload reproduces them bit for bit.
      for (std::size_t k = 0; k < z.size(); ++k) z[k] = e[k].embed();
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = e[z.size() + k].embed();
    }
    try {
      if (!b.add(z, q, e)) parse_fail(where, "duplicate point");
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::kParse) throw;
      parse_fail(where, err.what());
    }
  }
  try {
    return std::move(b).build(window, core, provenance);
  } catch (const Error& err) {
    parse_fail("patch", err.what());
  }
}

std::string scheme_to_json(const CutProjectScheme& scheme) {
  ordered_json j;
  j["kind"] = scheme.kind == CutProjectScheme::Kind::kSilver ? "silver" : "matrix";
  j["physical_dim"] = scheme.physical_dim;
  j["internal_dim"] = scheme.internal_dim;
  if (scheme.kind == CutProjectScheme::Kind::kMatrix) j["basis"] = numbers(scheme.basis);
  if (scheme.kind == CutProjectScheme::Kind::kSilver) j["radicand"] = scheme.radicand;
  ordered_json w = ordered_json::array();
  for (const auto& iv : scheme.window) w.push_back({round12(iv.lo), round12(iv.hi)});
  j["window"] = std::move(w);
  return dump(j);
}

CutProjectScheme scheme_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  only_keys(j, "scheme", {"kind", "physical_dim", "internal_dim", "basis", "window", "radicand"});
  const auto& kind = need(j, "scheme", "kind");
  if (!kind.is_string()) parse_fail("scheme.kind", "expected a string");
  CutProjectScheme s;
  const auto k = kind.get<std::string>();
  if (k == "silver") {
    s.kind = CutProjectScheme::Kind::kSilver;
  } else if (k == "matrix") {
    s.kind = CutProjectScheme::Kind::kMatrix;
  } else {
    parse_fail("scheme.kind", "expected \"silver\" or \"matrix\"");
  }
  const auto p = get_int(need(j, "scheme", "physical_dim"), "scheme.physical_dim");
  const auto i = get_int(need(j, "scheme", "internal_dim"), "scheme.internal_dim");
  if (p < 0 || i < 0) parse_fail("scheme", "dimensions must be nonnegative");
  s.physical_dim = static_cast<std::size_t>(p);
  s.internal_dim = static_cast<std::size_t>(i);
  if (j.contains("basis")) s.basis = get_numbers(j["basis"], "scheme.basis");
  if (j.contains("radicand")) s.radicand = get_int(j["radicand"], "scheme.radicand");
  const auto& w = need(j, "scheme", "window");
  if (!w.is_array()) parse_fail("scheme.window", "expected an array of [lo, hi]");
  for (std::size_t n = 0; n < w.size(); ++n) {
    const auto iv = get_numbers(w[n], "scheme.window[" + std::to_string(n) + "]");
    if (iv.size() != 2) parse_fail("scheme.window[" + std::to_string(n) + "]", "expected [lo, hi]");
    s.window.push_back({iv[0], iv[1]});
  }
  s.validate();
  return s;
}

std::string measure_to_json(const WeightedPointMeasure& eta) {
  ordered_json j;
  j["group"] = group_json(eta.group);
  j["range"] = round12(eta.range);
  j["normalization"] = round12(eta.normalization);
  ordered_json atoms = ordered_json::array();
  const std::size_t dz = eta.group.dim_z();
  for (const auto& a : eta.atoms) {
    ordered_json o;
    o["z"] = numbers(a.z);
    o["q"] = numbers(a.q);
    o["weight"] = round12(a.weight);
    if (!a.exact.empty()) {
      const std::span<const QuadInt> e(a.exact);
      o["exact"] = {{"z", quads(e.first(dz))}, {"q", quads(e.subspan(dz))}};
    }
    atoms.push_back(std::move(o));
  }
  j["atoms"] = std::move(atoms);
  return dump(j);
}

std::string classification_to_json(const IntPolynomial& p, const SpectrumClassification& c) {
  ordered_json j;
  j["polynomial"] = p.coeffs;
  j["polynomial_text"] = to_string(p);
  ordered_json roots = ordered_json::array();
  for (const auto& r : c.roots) {
    roots.push_back({{"re", round12(r.real())}, {"im", round12(r.imag())}, {"modulus", round12(std::abs(r))}});
  }
  j["roots"] = std::move(roots);
  j["designated"] = {{"re", round12(c.designated.real())}, {"im", round12(c.designated.imag())}};
  j["kind"] = to_string(c.kind);
  j["warnings"] = c.warnings;
  return dump(j);
}

std::string fibers_csv(const AlignmentReport& report) {
  std::string out;
  const std::size_t dq = report.fibers.empty() ? 0 : report.fibers.front().delta.size();
  std::vector<std::string> head;
  for (std::size_t k = 0; k < dq; ++k) head.push_back("delta_" + std::to_string(k));
  for (const char* h : {"cardinality", "covering", "essential"}) head.emplace_back(h);
  out += csv_line(head);
  for (const auto& f : report.fibers) {
    std::vector<std::string> row;
    for (double d : f.delta) row.push_back(detail::num(d));
    row.push_back(std::to_string(f.cardinality));
    row.push_back(detail::num(f.covering_estimate));
    row.emplace_back(f.essential ? "1" : "0");
    out += csv_line(row);
  }
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::string out;
  const std::size_t dim = rows.empty() ? 1 : rows.front().theta.size();
  std::vector<std::string> head;
  for (std::size_t k = 0; k < dim; ++k) head.push_back("theta_" + std::to_string(k));
  for (const char* h : {"re_D", "im_D", "abs2_D", "c_xi", "T", "cauchy_tail"}) head.emplace_back(h);
  out += csv_line(head);
  for (const auto& r : rows) {
    std::vector<std::string> row;
    for (double t : r.theta) row.push_back(detail::num(t));
    row.push_back(detail::num(r.density.real()));
    row.push_back(detail::num(r.density.imag()));
    row.push_back(detail::num(std::norm(r.density)));
    row.push_back(detail::num(r.c_xi));
    row.push_back(detail::num(r.T));
    row.push_back(detail::num(r.cauchy_tail));
    out += csv_line(row);
  }
  return out;
}

std::string bragg_csv(const BraggResult& result) {
  std::string out;
  const std::size_t dim = result.scan.empty() ? 1 : result.scan.front().theta.size();
  std::vector<std::string> head;
  for (std::size_t k = 0; k < dim; ++k) head.push_back("theta_" + std::to_string(k));
  for (const char* h : {"c_xi", "is_peak", "c_1", "eps"}) head.emplace_back(h);
  out += csv_line(head);
  const double threshold = (1.0 - result.eps) * result.c_1;
  for (const auto& s : result.scan) {
    std::vector<std::string> row;
    for (double t : s.theta) row.push_back(detail::num(t));
    row.push_back(detail::num(s.c_xi));
    row.emplace_back(s.c_xi >= threshold ? "1" : "0");
    row.push_back(detail::num(result.c_1));
    row.push_back(detail::num(result.eps));
    out += csv_line(row);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::kInvalidArgument, "failed writing " + path);
}

}  // namespace quasilat
