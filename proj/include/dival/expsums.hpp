#pragma once

// Complete and incomplete exponential sums with their bounds. Every phase is
// reduced to an integer numerator mod the sum's modulus before it touches a
// table of roots of unity.

#include <cmath>
#include <complex>
#include <limits>

#include "dival/arith.hpp"
#include "dival/numeric.hpp"

namespace dival {

/// A sum's value next to the bound it is measured against.
struct ExpSumResult {
  std::complex<double> value;
  double abs_value = 0;
  double bound = 0;
  double ratio = 0;
  double constant_used = 1;
};

inline ExpSumResult make_result(std::complex<double> value, double bound, double constant = 1.0) {
  ExpSumResult r;
  r.value = value;
  r.abs_value = std::abs(value);
  r.constant_used = constant;
  r.bound = constant * bound;
  r.ratio = r.bound > 0 ? r.abs_value / r.bound : 0.0;
  return r;
}

/// Inverses of every residue mod q (0 on non-units; everything is 0 mod 1).
inline std::vector<u64> inverse_table(u64 q) {
  std::vector<u64> inv(q, 0);
  if (q == 1) return inv;
  for (u64 s = 1; s < q; ++s)
    if (inv[s] == 0 && std::gcd(s, q) == 1) {
      u64 t = mod_inverse(i64(s), q);
      inv[s] = t;
      inv[t] = s;
    }
  return inv;
}

/// Ramanujan sum C_q(n) = sum_{d | (q, n)} d mu(q/d).
inline i64 ramanujan(u64 q, i64 n) {
  require(q >= 1, "ramanujan: q must be >= 1");
  const u64 g = gcd_signed(n, q);  // gcd(0, q) = q
  i64 total = 0;
  for (u64 d : divisors(g)) total += i64(d) * mobius(q / d);
  return total;
}

/// Roots of unity and inverses mod q, shared across many Kloosterman sums
/// with the same modulus.
class KloostermanKernel {
 public:
  explicit KloostermanKernel(u64 q) : q_(q), roots_(q), inv_(inverse_table(q)) {
    require(q >= 1 && q <= 100'000, "kloosterman: need 1 <= q <= 10^5");
  }

  u64 modulus() const { return q_; }

  /// S(a, b; q) = sum over units s of e((a s + b s^{-1}) / q), against
  /// tau(q) sqrt(q) gcd(a, b, q)^{1/2}.
  ExpSumResult operator()(i64 a, i64 b, double constant = 1.0) const {
    const u64 am = mod_floor(a, q_), bm = mod_floor(b, q_);
    CompensatedComplexSum acc;
    for (u64 s = 0; s < q_; ++s) {
      if (std::gcd(s, q_) != 1) continue;
      acc += roots_[(mulmod(am, s, q_) + mulmod(bm, inv_[s], q_)) % q_];
    }
    const u64 g = std::gcd(gcd_signed(a, q_), gcd_signed(b, q_));
    double bound = double(num_divisors(q_)) * std::sqrt(double(q_)) * std::sqrt(double(g));
    return make_result(acc.value(), bound, constant);
  }

 private:
  u64 q_;
  UnitRoots roots_;
  std::vector<u64> inv_;
};

inline ExpSumResult kloosterman(i64 a, i64 b, u64 q, double constant = 1.0) {
  return KloostermanKernel(q)(a, b, constant);
}

inline void require_squarefree(u64 d, const char* who) {
  require(d >= 1 && is_squarefree(d), std::string(who) + ": modulus must be squarefree");
}

/// sum_{n <= N, (n, d1) = 1, (n + ell, d2) = 1} e(c1 n^{-1}/d1 + c2 (n+ell)^{-1}/d2)
/// against (d1 d2)^{1/2} tau(d1 d2) + (c1,d1)(c2,d2)(d1,d2)^2 N/(d1 d2).
inline ExpSumResult incomplete_kloosterman(i64 c1, u64 d1, i64 c2, u64 d2, i64 ell, u64 N,
                                           double constant = 1.0) {
  require_squarefree(d1, "incomplete_kloosterman");
  require_squarefree(d2, "incomplete_kloosterman");
  const u64 D = d1 * d2;
  require(D > 10, "incomplete_kloosterman: need d1 d2 > 10");
  require(D <= 100'000, "incomplete_kloosterman: need d1 d2 <= 10^5");
  const UnitRoots roots(D);
  const auto inv1 = inverse_table(d1);
  const auto inv2 = inverse_table(d2);
  const u64 c1m = mod_floor(c1, d1), c2m = mod_floor(c2, d2);
  CompensatedComplexSum acc;
  for (u64 n = 1; n <= N; ++n) {
    const u64 r1 = n % d1;
    const u64 r2 = mod_floor(i64(n) + ell, d2);
    if (std::gcd(r1, d1) != 1 || std::gcd(r2, d2) != 1) continue;
    // c1 nbar/d1 + c2 mbar/d2 over the common denominator d1 d2
    u64 phase = (mulmod(c1m, inv1[r1], d1) * d2 + mulmod(c2m, inv2[r2], d2) * d1) % D;
    acc += roots[phase];
  }
  const double g1 = double(gcd_signed(c1, d1)), g2 = double(gcd_signed(c2, d2));
  const double g12 = double(std::gcd(d1, d2));
  double bound = std::sqrt(double(D)) * double(num_divisors(D)) +
                 g1 * g2 * g12 * g12 * double(N) / double(D);
  return make_result(acc.value(), bound, constant);
}

/// sum_{n <= N, (n, d) = 1} min{H, ||c n^{-1}/d||^{-1}} against
/// (dN)^{0.1} (H + N). ||0||^{-1} counts as +infinity, so such terms give H.
inline ExpSumResult minsum(i64 c, u64 d, double H, u64 N, double epsilon = 0.1,
                           double constant = 1.0) {
  require(d >= 1 && d <= 100'000, "minsum: need 1 <= d <= 10^5");
  require(H >= 2 && N >= 2, "minsum: need H, N >= 2");
  require(gcd_signed(c, d) == 1, "minsum: need gcd(c, d) = 1");
  const auto inv = inverse_table(d);
  const u64 cm = mod_floor(c, d);
  CompensatedSum acc;
  for (u64 n = 1; n <= N; ++n) {
    const u64 r = n % d;
    if (std::gcd(r, d) != 1) continue;
    const u64 num = mulmod(cm, inv[r], d);
    const u64 dist = std::min(num, d - num);  // ||num/d|| = dist/d
    double term = dist == 0 ? H : std::min(H, double(d) / double(dist));
    acc += term;
  }
  double bound = std::pow(double(d) * double(N), epsilon) * (H + double(N));
  return make_result({acc.value(), 0.0}, bound, constant);
}

/// T(k; m1, m2; q) = sum over l with (l(l+k), q) = 1 and units t1, t2 of
/// e_q(l^{-1} t1 - (l+k)^{-1} t2 + m1 t1^{-1} - m2 t2^{-1}), by the direct
/// triple loop, against (k, q)^{1/2} q^{3/2} tau(q).
inline ExpSumResult birch_bombieri_T(i64 k, i64 m1, i64 m2, u64 q, double constant = 1.0) {
  require_squarefree(q, "birch_bombieri_T");
  require(q <= 300, "birch_bombieri_T: need q <= 300");
  const UnitRoots roots(q);
  const auto inv = inverse_table(q);
  std::vector<u64> units;
  for (u64 t = 0; t < q; ++t)
    if (std::gcd(t, q) == 1) units.push_back(t);
  const u64 m1m = mod_floor(m1, q), m2m = mod_floor(m2, q);
  CompensatedComplexSum acc;
  for (u64 l = 0; l < q; ++l) {
    const u64 lk = mod_floor(i64(l) + k, q);
    if (std::gcd(mulmod(l, lk, q), q) != 1) continue;
    const u64 il = inv[l], ilk = inv[lk];
    for (u64 t1 : units) {
      const u64 p1 = (mulmod(il, t1, q) + mulmod(m1m, inv[t1], q)) % q;
      for (u64 t2 : units) {
        const u64 p2 = (mulmod(ilk, t2, q) + mulmod(m2m, inv[t2], q)) % q;
        acc += roots[(p1 + q - p2) % q];
      }
    }
  }
  double bound = std::sqrt(double(gcd_signed(k, q))) * std::pow(double(q), 1.5) *
                 double(num_divisors(q));
  return make_result(acc.value(), bound, constant);
}

}  // namespace dival
