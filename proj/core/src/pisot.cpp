#include "quasilat/pisot.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "format.hpp"
#include "quasilat/error.hpp"

namespace quasilat {
namespace {

using cld = std::complex<long double>;

cld eval(const IntPolynomial& p, cld x, cld* derivative) {
  cld v = 0.0L, d = 0.0L;
  for (std::size_t i = p.coeffs.size(); i-- > 0;) {
    d = d * x + v;
    v = v * x + static_cast<long double>(p.coeffs[i]);
  }
  if (derivative) *derivative = d;
  return v;
}

void sort_roots(std::vector<std::complex<double>>& roots) {
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
    if (std::abs(a.real() - b.real()) > 1e-12) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

Eigen::MatrixXd to_eigen(const Matrix& M) {
  Eigen::MatrixXd E(M.rows, M.cols);
  for (std::size_t r = 0; r < M.rows; ++r)
    for (std::size_t c = 0; c < M.cols; ++c) E(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = M(r, c);
  return E;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> char_poly(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  if (n == 0) return {1.0};
  const Eigen::MatrixXd H = Eigen::HessenbergDecomposition<Eigen::MatrixXd>(A).matrixH();
  // p[k] is the characteristic polynomial of the leading k×k block of H.
  std::vector<std::vector<double>> p(static_cast<std::size_t>(n) + 1);
  p[0] = {1.0};
  for (Eigen::Index k = 1; k <= n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 1, 0.0);
    const auto& prev = p[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      next[i + 1] += prev[i];
      next[i] -= H(k - 1, k - 1) * prev[i];
    }
    double sub = 1.0;
    for (Eigen::Index m = 1; m < k; ++m) {
      sub *= H(k - m, k - m - 1);
      const double c = H(k - 1 - m, k - 1) * sub;
      const auto& lower = p[static_cast<std::size_t>(k - 1 - m)];
      for (std::size_t i = 0; i < lower.size(); ++i) next[i] -= c * lower[i];
    }
    p[static_cast<std::size_t>(k)] = std::move(next);
  }
  return p.back();
}

std::vector<std::complex<double>> eigen_values(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::kInvalidArgument, "eigensolver did not converge");
  std::vector<std::complex<double>> out(solver.eigenvalues().data(),
                                        solver.eigenvalues().data() + solver.eigenvalues().size());
  sort_roots(out);
  return out;
}

// Continued-fraction approximation p/q of x with q ≤ max_den.
std::pair<long long, long long> rational_approx(double x, long long max_den) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a;
    if (frac < 1e-12) break;
    r = 1.0 / frac;
  }
  return {h1, k1};
}

}  // namespace

void IntPolynomial::validate() const {
  if (coeffs.size() < 2) throw Error(ErrorKind::kNonMonic, "polynomial must have degree ≥ 1");
  if (coeffs.back() != 1) {
    throw Error(ErrorKind::kNonMonic, "leading coefficient is " + std::to_string(coeffs.back()) + ", expected 1");
  }
}

std::complex<double> IntPolynomial::operator()(std::complex<double> x) const {
  const cld v = eval(*this, cld(x.real(), x.imag()), nullptr);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

std::string to_string(const IntPolynomial& p) {
  std::string s;
  for (std::size_t i = p.coeffs.size(); i-- > 0;) {
    const std::int64_t c = p.coeffs[i];
    if (c == 0) continue;
    const std::int64_t mag = c < 0 ? -c : c;
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (mag != 1 || i == 0) s += std::to_string(mag);
    if (i >= 1) s += "X";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

IntPolynomial min_poly_quadratic(const QuadInt& x) {
  if (x.b == 0) return {{-x.a, 1}};
  const QuadInt c = quad_sub(quad_mul(QuadInt::integer(x.a, x.d), QuadInt::integer(x.a, x.d)),
                             quad_mul(QuadInt::integer(x.d, x.d), quad_mul(QuadInt::integer(x.b, x.d),
                                                                           QuadInt::integer(x.b, x.d))));
  return {{c.a, quad_scale(QuadInt::integer(x.a, x.d), -2).a, 1}};
}

std::vector<std::complex<double>> polynomial_roots(const IntPolynomial& p) {
  p.validate();
  const std::size_t n = p.degree();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -static_cast<double>(p.coeffs[i]);
  auto roots = eigen_values(C);
  for (auto& r : roots) {
    cld x(r.real(), r.imag());
    for (int it = 0; it < 4; ++it) {
      cld d;
      const cld v = eval(p, x, &d);
      if (std::abs(d) == 0.0L) break;
      const cld step = v / d;
      const cld candidate = x - step;
      if (std::abs(eval(p, candidate, nullptr)) > std::abs(v)) break;
      x = candidate;
    }
    r = {static_cast<double>(x.real()), static_cast<double>(x.imag())};
  }
  sort_roots(roots);
  return roots;
}

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::kPisot: return "Pisot";
    case SpectrumKind::kSalem: return "Salem";
    case SpectrumKind::kNeither: return "NeitherPS";
    case SpectrumKind::kNotAlgebraicInteger: return "NotAlgebraicInteger";
  }
  return "unknown";
}

SpectrumClassification classify_pisot_salem(const IntPolynomial& p, double t_hint, double tol) {
  p.validate();
  if (!(t_hint > 1.0)) throw Error(ErrorKind::kInvalidArgument, "t_hint must exceed 1");
  SpectrumClassification out;
  out.roots = polynomial_roots(p);
  std::size_t designated = out.roots.size();
  double best = kHintTolerance * std::max(1.0, t_hint);
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const auto r = out.roots[i];
    if (std::abs(r.imag()) > tol || !(r.real() > 1.0)) continue;
    const double d = std::abs(r.real() - t_hint);
    if (d <= best) {
      best = d;
      designated = i;
    }
  }
  if (designated == out.roots.size()) {
    throw Error(ErrorKind::kNotARoot, "no real root > 1 of " + to_string(p) + " within " +
                                          detail::num(kHintTolerance) + " of " + detail::num(t_hint));
  }
  out.designated = out.roots[designated];
  bool pisot = true, bounded = true, on_circle = false;
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    if (i == designated) continue;
    const double m = std::abs(out.roots[i]);
    out.conjugate_moduli.push_back(m);
    if (!(m < 1.0 - tol)) pisot = false;
    if (m > 1.0 + tol) bounded = false;
    if (std::abs(m - 1.0) <= tol) on_circle = true;
  }
  if (pisot) {
    out.kind = SpectrumKind::kPisot;
  } else if (bounded && on_circle) {
    out.kind = SpectrumKind::kSalem;
    out.warnings.push_back("unit-circle roots decided within tolerance " + detail::num(tol));
  } else {
    out.kind = SpectrumKind::kNeither;
    if (bounded) out.warnings.push_back("roots just inside the unit circle band; not Pisot at tolerance " +
                                        detail::num(tol));
  }
  return out;
}

DilationReport dilation_invariance(const PointPatch& P, const QuadInt& t, DilationMode mode) {
  if (!P.has_exact()) throw Error(ErrorKind::kInvalidArgument, "dilation_invariance needs exact coordinates");
  if (P.radicand() != t.d) throw Error(ErrorKind::kRadicandMismatch, "dilation factor and patch radicands differ");
  const auto& G = P.group();
  if (mode == DilationMode::kAbelian && !G.is_abelian()) {
    throw Error(ErrorKind::kInvalidArgument, "abelian dilation on a non-abelian group; use stratified2");
  }
  const double s = std::abs(t.embed());
  if (!(s > 0.0)) throw Error(ErrorKind::kInvalidArgument, "dilation factor must be nonzero");
  DilationReport out;
  const double sq = std::max(s, 1.0);
  const double sz = mode == DilationMode::kStratified2 ? std::max(s * s, 1.0) : sq;
  out.tested_core = {P.core().q / sq, P.core().z / sz};
  const bool stratified = mode == DilationMode::kStratified2;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!P.in_box(i, out.tested_core, 1e-12)) continue;
    ++out.checked;
    const ExactElement x = P.exact_element(i);
    if (!P.contains(dilation(G, t, x, stratified))) {
      out.holds = false;
      out.witness = x;
      out.witness_float = P.element(i);
      break;
    }
  }
  return out;
}

Matrix Matrix::square(std::size_t n, std::vector<double> data) {
  if (data.size() != n * n) throw Error(ErrorKind::kNonSquare, "matrix data does not form a square");
  return {n, n, std::move(data)};
}

std::vector<double> characteristic_polynomial(const Matrix& M) {
  if (M.rows != M.cols || M.data.size() != M.rows * M.cols) throw Error(ErrorKind::kNonSquare, "matrix is not square");
  return char_poly(to_eigen(M));
}

std::vector<std::complex<double>> eigenvalues(const Matrix& M) {
  if (M.rows != M.cols || M.data.size() != M.rows * M.cols) throw Error(ErrorKind::kNonSquare, "matrix is not square");
  return eigen_values(to_eigen(M));
}

std::optional<IntPolynomial> recognize_quadratic(std::complex<double> lambda, double* residual) {
  const double tol = 1e-9;
  auto report = [&](double r) {
    if (residual) *residual = r;
  };
  if (std::abs(lambda.imag()) > tol) {
    const double s = 2.0 * lambda.real();
    const double p = std::norm(lambda);
    const double rs = std::abs(s - std::round(s)), rp = std::abs(p - std::round(p));
    if (rs <= tol * std::max(1.0, std::abs(s)) && rp <= tol * std::max(1.0, p)) {
      report(std::max(rs, rp));
      return IntPolynomial{{std::llround(p), -std::llround(s), 1}};
    }
    return std::nullopt;
  }
  const double x = lambda.real();
  if (std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x))) {
    report(std::abs(x - std::round(x)));
    return IntPolynomial{{-std::llround(x), 1}};
  }
  // λ² − sλ + p = 0 with integer trace s = λ + λ'.
  const auto centre = static_cast<long long>(std::llround(x));
  const long long span = static_cast<long long>(2.0 * std::abs(x)) + 1000;
  for (long long k = 0; k <= span; ++k) {
    for (const long long s : {centre + k, centre - k}) {
      const double p = static_cast<double>(s) * x - x * x;
      const double r = std::abs(p - std::round(p));
      if (r <= tol * std::max(1.0, std::abs(p))) {
        report(r);
        return IntPolynomial{{std::llround(p), -s, 1}};
      }
      if (k == 0) break;
    }
  }
  return std::nullopt;
}

std::string to_string(GaloisCheck g) {
  switch (g) {
    case GaloisCheck::kHolds: return "holds";
    case GaloisCheck::kFails: return "fails";
    case GaloisCheck::kUnchecked: return "unchecked";
  }
  return "unchecked";
}

TowerReport tower_spectrum_check(const std::vector<Matrix>& blocks, std::uint64_t seed) {
  if (blocks.empty()) throw Error(ErrorKind::kInvalidArgument, "no blocks given");
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (b.rows != b.cols || b.data.size() != b.rows * b.cols || b.rows == 0) {
      throw Error(ErrorKind::kNonSquare, "block is not a nonempty square matrix");
    }
    n += b.rows;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  TowerReport out;
  out.block_product = {1.0};
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    const auto o = static_cast<Eigen::Index>(offset);
    const auto m = static_cast<Eigen::Index>(b.rows);
    A.block(o, o, m, m) = to_eigen(b);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = o + m; c < static_cast<Eigen::Index>(n); ++c) A(o + r, c) = uni(rng);
    out.block_product = poly_mul(out.block_product, char_poly(to_eigen(b)));
    const auto ev = eigen_values(to_eigen(b));
    out.spectrum.insert(out.spectrum.end(), ev.begin(), ev.end());
    offset += b.rows;
  }
  sort_roots(out.spectrum);
  out.char_poly = char_poly(A);
  double scale = 1.0;
  for (double c : out.block_product) scale = std::max(scale, std::abs(c));
  for (std::size_t i = 0; i < out.char_poly.size(); ++i) {
    out.residual = std::max(out.residual, std::abs(out.char_poly[i] - out.block_product[i]) / scale);
  }
  out.factored = out.residual <= 1e-8;

  out.simple_spectrum = true;
  for (std::size_t i = 0; i < out.spectrum.size(); ++i)
    for (std::size_t j = i + 1; j < out.spectrum.size(); ++j)
      if (std::abs(out.spectrum[i] - out.spectrum[j]) <= 1e-8) out.simple_spectrum = false;

  bool all_recognized = true;
  for (const auto& lambda : out.spectrum) {
    EigenRecognition rec;
    rec.value = lambda;
    rec.min_poly = recognize_quadratic(lambda, &rec.residual);
    if (!rec.min_poly) {
      all_recognized = false;
      if (std::abs(lambda.imag()) <= 1e-9) {
        const auto [num, den] = rational_approx(lambda.real(), 1000000);
        if (den > 1 && std::abs(lambda.real() - static_cast<double>(num) / static_cast<double>(den)) <= 1e-12) {
          rec.rational_non_integer = true;
          SpectrumClassification c;
          c.kind = SpectrumKind::kNotAlgebraicInteger;
          c.designated = lambda;
          c.warnings.push_back("rational " + std::to_string(num) + "/" + std::to_string(den));
          rec.classification = c;
        }
      }
    } else if (std::abs(lambda.imag()) <= 1e-9 && lambda.real() > 1.0) {
      rec.classification = classify_pisot_salem(*rec.min_poly, lambda.real());
    }
    out.eigen.push_back(std::move(rec));
  }
  if (all_recognized) {
    out.galois = GaloisCheck::kHolds;
    for (std::size_t i = 0; i < out.eigen.size(); ++i) {
      for (std::size_t j = i + 1; j < out.eigen.size(); ++j) {
        const auto& a = out.eigen[i];
        const auto& b = out.eigen[j];
        if (a.min_poly->degree() == 2 && *a.min_poly == *b.min_poly && std::abs(a.value - b.value) > 1e-8) {
          out.galois = GaloisCheck::kFails;
        }
      }
    }
  }
  return out;
}

}  // namespace quasilat
