#include "quasilat/ring.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "quasilat/error.hpp"
#include "quasilat/pointset.hpp"
#include "format.hpp"

namespace quasilat {
namespace {

__extension__ typedef __int128 i128;

void check_radicand(const QuadInt& x, const QuadInt& y) {
  if (x.d != y.d) {
    throw Error(ErrorKind::kRadicandMismatch,
                "radicands " + std::to_string(x.d) + " and " + std::to_string(y.d));
  }
}

std::int64_t bounded(i128 v, std::int64_t limit) {
  if (v > limit || v < -static_cast<i128>(limit)) {
    throw Error(ErrorKind::kOverflow, "ring coefficient exceeds limit " + std::to_string(limit));
  }
  return static_cast<std::int64_t>(v);
}

i128 checked_mul(i128 x, i128 y) {
  i128 out;
  if (__builtin_mul_overflow(x, y, &out)) {
    throw Error(ErrorKind::kOverflow, "exact comparison out of 128-bit range");
  }
  return out;
}

i128 checked_add(i128 x, i128 y) {
  i128 out;
  if (__builtin_add_overflow(x, y, &out)) {
    throw Error(ErrorKind::kOverflow, "exact comparison out of 128-bit range");
  }
  return out;
}

int sign(i128 v) { return (v > 0) - (v < 0); }

// sign(u + b·√d) for integers u, b and d > 0 not a perfect square.
int sign_with_sqrt(i128 u, i128 b, std::int64_t d) {
  const int su = sign(u);
  const int sb = sign(b);
  if (sb == 0) return su;
  if (su == 0 || su == sb) return sb;
  // Opposite signs: compare u² with b²·d.
  const i128 uu = checked_mul(u, u);
  const i128 bbd = checked_mul(checked_mul(b, b), d);
  if (uu > bbd) return su;
  if (uu < bbd) return sb;
  return 0;
}

}  // namespace

double QuadInt::embed() const {
  return static_cast<double>(static_cast<long double>(a) +
                             static_cast<long double>(b) * std::sqrt(static_cast<long double>(d)));
}

double QuadInt::star_embed() const {
  return static_cast<double>(static_cast<long double>(a) -
                             static_cast<long double>(b) * std::sqrt(static_cast<long double>(d)));
}

QuadInt quad_add(const QuadInt& x, const QuadInt& y, std::int64_t limit) {
  check_radicand(x, y);
  return {bounded(static_cast<i128>(x.a) + y.a, limit), bounded(static_cast<i128>(x.b) + y.b, limit),
          x.d};
}

QuadInt quad_sub(const QuadInt& x, const QuadInt& y, std::int64_t limit) {
  check_radicand(x, y);
  return {bounded(static_cast<i128>(x.a) - y.a, limit), bounded(static_cast<i128>(x.b) - y.b, limit),
          x.d};
}

QuadInt quad_neg(const QuadInt& x) { return {-x.a, -x.b, x.d}; }

QuadInt quad_mul(const QuadInt& x, const QuadInt& y, std::int64_t limit) {
  check_radicand(x, y);
  const i128 a = checked_add(checked_mul(x.a, y.a), checked_mul(checked_mul(x.d, x.b), y.b));
  const i128 b = checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a));
  return {bounded(a, limit), bounded(b, limit), x.d};
}

QuadInt quad_scale(const QuadInt& x, std::int64_t k, std::int64_t limit) {
  return {bounded(checked_mul(x.a, k), limit), bounded(checked_mul(x.b, k), limit), x.d};
}

QuadInt star(const QuadInt& x) { return {x.a, -x.b, x.d}; }

int compare_embed(const QuadInt& x, double r) {
  if (!std::isfinite(r)) return r > 0 ? -1 : 1;
  const long double root = std::sqrt(static_cast<long double>(x.d));
  const long double approx =
      static_cast<long double>(x.a) + static_cast<long double>(x.b) * root - static_cast<long double>(r);
  const long double scale = std::abs(static_cast<long double>(x.a)) +
                            std::abs(static_cast<long double>(x.b)) * root + std::abs(r) + 1.0L;
  if (std::abs(approx) > 64.0L * std::numeric_limits<long double>::epsilon() * scale) {
    return approx > 0 ? 1 : -1;
  }
  // Exact route: r = m·2^e with integer m.
  int e = 0;
  const double frac = std::frexp(r, &e);
  // frac in [0.5, 1): m = frac·2^53, r = m·2^(e−53).
  const auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
  int shift = e - 53;
  i128 scaled_m = m;
  i128 factor = 1;
  // Strip trailing zero bits of m to keep the scale small.
  while (shift < 0 && (scaled_m & 1) == 0 && scaled_m != 0) {
    scaled_m >>= 1;
    ++shift;
  }
  if (scaled_m == 0) shift = 0;
  if (shift >= 0) {
    if (shift > 62) throw Error(ErrorKind::kOverflow, "comparison bound too large for exact route");
    scaled_m = checked_mul(scaled_m, static_cast<i128>(1) << shift);
  } else {
    if (-shift > 100) throw Error(ErrorKind::kOverflow, "comparison bound too fine for exact route");
    factor = static_cast<i128>(1) << (-shift);
  }
  // sign(a·f − m + b·f·√d)
  const i128 u = checked_add(checked_mul(x.a, factor), -scaled_m);
  const i128 b = checked_mul(x.b, factor);
  return sign_with_sqrt(u, b, x.d);
}

bool embed_within(const QuadInt& x, double bound) {
  return compare_embed(x, bound) <= 0 && compare_embed(x, -bound) >= 0;
}

bool star_within(const QuadInt& x, double bound) { return embed_within(star(x), bound); }

std::string to_string(const QuadInt& x) {
  std::string s = std::to_string(x.a);
  s += x.b < 0 ? "-" : "+";
  s += std::to_string(x.b < 0 ? -x.b : x.b);
  s += "√" + std::to_string(x.d);
  return s;
}

PointPatch model_set_1d(double R, double T, std::int64_t d) {
  if (!(R > 0.0)) throw Error(ErrorKind::kInvalidArgument, "window radius R must be positive");
  if (!(T >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "physical radius T must be nonnegative");
  if (d < 2) throw Error(ErrorKind::kInvalidArgument, "radicand must be ≥ 2");
  const double root = std::sqrt(static_cast<double>(d));
  // x = a + b√d, x* = a − b√d ⇒ b = (x − x*)/(2√d).
  const auto b_max = static_cast<std::int64_t>(std::ceil((T + R) / (2.0 * root))) + 1;
  PatchBuilder builder(CentralExtensionGroup::abelian(1), /*exact=*/true);
  for (std::int64_t b = -b_max; b <= b_max; ++b) {
    const double shift = static_cast<double>(b) * root;
    const double lo = std::max(-T - shift, -R + shift);
    const double hi = std::min(T - shift, R + shift);
    if (lo > hi + 2.0) continue;
    for (auto a = static_cast<std::int64_t>(std::floor(lo)) - 1;
         a <= static_cast<std::int64_t>(std::ceil(hi)) + 1; ++a) {
      const QuadInt x{a, b, d};
      if (!embed_within(x, T) || !star_within(x, R)) continue;
      const double coord = x.embed();
      builder.add({}, std::span<const double>(&coord, 1), std::span<const QuadInt>(&x, 1));
    }
  }
  return std::move(builder).build({T, 0.0}, {T, 0.0},
                                  "model_set_1d(R=" + detail::num(R) + ",T=" + detail::num(T) +
                                      ",d=" + std::to_string(d) + ")");
}

}  // namespace quasilat
