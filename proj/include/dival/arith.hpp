#pragma once

// Integer and modular arithmetic primitives shared by every other header:
// factorization by trial division, tau_k, Moebius/phi, modular inverses,
// smooth parts of squarefree moduli, exact exponent-domain comparisons and
// the parameter set used by the moduli-family machinery.

#include <algorithm>
#include <compare>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace dival {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Errors. Everything derives from std::exception types so callers can catch
// broadly; the subclasses let tests and the CLI tell the failure modes apart.
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct no_inverse_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct arith_overflow_error : std::overflow_error {
  using std::overflow_error::overflow_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw precondition_error(what);
}

inline constexpr u64 kMaxFactorInput = u64{1} << 63;

inline u64 gcd_u(u64 a, u64 b) { return std::gcd(a, b); }

// gcd with a signed first argument, as used for residues: gcd(-3, 6) = 3,
// gcd(0, m) = m.
inline u64 gcd_signed(i64 a, u64 m) {
  u64 ua = a < 0 ? u64(-(a + 1)) + 1 : u64(a);
  return std::gcd(ua, m);
}

// a mod m in [0, m).
inline u64 mod_floor(i64 a, u64 m) {
  if (m == 1) return 0;
  i128 r = i128(a) % i128(m);
  if (r < 0) r += m;
  return u64(r);
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline u64 isqrt(u64 n) {
  u64 r = u64(std::sqrt(double(n)));
  while (r > 0 && u128(r) * r > n) --r;
  while (u128(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Inverse of a modulo m in [0, m). Modulo 1 every residue is 0 and the
/// inverse is 0 by convention.
inline u64 mod_inverse(i64 a, u64 m) {
  require(m >= 1, "mod_inverse: modulus must be positive");
  if (m == 1) return 0;
  i128 old_r = i128(mod_floor(a, m)), r = m;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    std::tie(old_r, r) = std::pair<i128, i128>{r, old_r - q * r};
    std::tie(old_s, s) = std::pair<i128, i128>{s, old_s - q * s};
  }
  if (old_r != 1)
    throw no_inverse_error("mod_inverse: gcd(" + std::to_string(a) + ", " +
                           std::to_string(m) + ") > 1, no inverse");
  i128 inv = old_s % i128(m);
  if (inv < 0) inv += m;
  return u64(inv);
}

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n together with its canonical prime decomposition (primes strictly
/// increasing, exponents >= 1; n = 1 has no factors).
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  bool is_squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
  }
  std::vector<u64> primes() const {
    std::vector<u64> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

// Trial division; fine for the desk-scale ranges (inputs <= 2^63, and in
// practice far smaller).
inline Factorization factorize(u64 n) {
  require(n >= 1, "factorize: n must be >= 1");
  require(n <= kMaxFactorInput, "factorize: n exceeds 2^63");
  Factorization f;
  f.n = n;
  auto pull = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.factors.push_back({p, e});
  };
  pull(2);
  pull(3);
  for (u64 p = 5; p <= n / p; p += 6) {
    pull(p);
    pull(p + 2);
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  auto f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].exponent == 1;
}

inline bool is_squarefree(u64 n) { return factorize(n).is_squarefree(); }

inline int mobius(u64 n) {
  auto f = factorize(n);
  if (!f.is_squarefree()) return 0;
  return f.factors.size() % 2 ? -1 : 1;
}

inline u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (unsigned i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}
inline u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

inline std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> ds{1};
  for (const auto& [p, e] : f.factors) {
    std::size_t base = ds.size();
    u64 pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}
inline std::vector<u64> divisors(u64 n) { return divisors(factorize(n)); }

/// Number of divisors, tau(n) = tau_2(n).
inline u64 num_divisors(u64 n) {
  u64 t = 1;
  for (const auto& f : factorize(n).factors) t *= f.exponent + 1;
  return t;
}

inline u128 checked_mul(u128 a, u128 b) {
  u128 out;
  if (__builtin_mul_overflow(a, b, &out))
    throw arith_overflow_error("128-bit overflow");
  return out;
}

/// Binomial coefficient C(n, r), exact, with overflow reported.
inline u128 binomial(u64 n, u64 r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  u128 c = 1;
  for (u64 i = 1; i <= r; ++i) {
    // c * (n - r + i) / i is exact at every step; divide the gcd out first
    // so the intermediate does not overflow before the final value would.
    u128 num = n - r + i;
    u64 den = i;
    u64 g = std::gcd(u64(c % den), den);
    c /= g;
    den /= g;
    num /= den;  // den now divides num
    c = checked_mul(c, num);
  }
  return c;
}

/// tau_k(p^e) = C(e + k - 1, k - 1).
inline u128 tau_k_prime_power(unsigned e, u64 k) {
  require(k >= 1, "tau_k: k must be >= 1");
  return binomial(e + k - 1, k - 1);
}

/// Number of ordered k-tuples of positive integers with product n.
inline u128 tau_k_at(u64 n, u64 k) {
  require(n >= 1, "tau_k_at: n must be >= 1");
  require(k >= 1, "tau_k_at: k must be >= 1");
  u128 t = 1;
  for (const auto& f : factorize(n).factors)
    t = checked_mul(t, tau_k_prime_power(f.exponent, k));
  return t;
}

// Sieve of Eratosthenes.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> ps;
  if (limit < 2) return ps;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    ps.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return ps;
}

/// Product of the prime factors of squarefree d that are <= z.
inline u64 smooth_part(u64 d, double z) {
  require(d >= 1, "smooth_part: d must be >= 1");
  auto f = factorize(d);
  require(f.is_squarefree(), "smooth_part: d must be squarefree");
  u64 s = 1;
  for (const auto& pp : f.factors)
    if (double(pp.prime) <= z) s *= pp.prime;
  return s;
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}
inline std::string to_string(i128 v) {
  return v < 0 ? "-" + to_string(u128(-(v + 1)) + 1) : to_string(u128(v));
}

inline mpz_class to_mpz(i128 v) {
  return mpz_class(to_string(v));
}
inline mpz_class to_mpz(u128 v) { return mpz_class(to_string(v)); }

// ---------------------------------------------------------------------------
// Exponent-domain comparisons.

/// Small exact rational used for exponents (varpi, 293/584, ...).
struct Exponent {
  i64 num = 0;
  i64 den = 1;

  constexpr Exponent() = default;
  constexpr Exponent(i64 n, i64 d = 1) : num(n), den(d) { normalize(); }

  constexpr void normalize() {
    if (den == 0) throw precondition_error("Exponent: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i64 g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return double(num) / double(den); }

  friend constexpr Exponent operator+(Exponent a, Exponent b) {
    return {checked(i128(a.num) * b.den + i128(b.num) * a.den),
            checked(i128(a.den) * b.den)};
  }
  friend constexpr Exponent operator-(Exponent a, Exponent b) {
    return a + Exponent(-b.num, b.den);
  }
  friend constexpr Exponent operator*(Exponent a, Exponent b) {
    return {checked(i128(a.num) * b.num), checked(i128(a.den) * b.den)};
  }
  friend constexpr Exponent operator/(Exponent a, Exponent b) {
    return a * Exponent(b.den, b.num);
  }
  friend constexpr bool operator==(Exponent a, Exponent b) {
    return a.num == b.num && a.den == b.den;
  }
  friend constexpr std::strong_ordering operator<=>(Exponent a, Exponent b) {
    return i128(a.num) * b.den <=> i128(b.num) * a.den;
  }
  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static constexpr i64 checked(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
      throw arith_overflow_error("Exponent: 64-bit overflow");
    return i64(v);
  }
};

enum class Cmp { less, equal, greater, indeterminate };

inline constexpr double kLogGuard = 1e-12;

inline Cmp compare_logs(double lhs, double rhs) {
  double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  double diff = lhs - rhs;
  if (std::abs(diff) <= kLogGuard * scale) return Cmp::indeterminate;
  return diff < 0 ? Cmp::less : Cmp::greater;
}

/// Compares n against X^e. Exact (n^den vs X^num in GMP) when the powers
/// stay below ~64k bits; otherwise in logs with a 1e-12 relative guard band,
/// where anything inside the band is reported indeterminate.
inline Cmp compare_power(const mpz_class& n, u64 X, Exponent e) {
  require(n > 0 && X >= 1, "compare_power: positive arguments required");
  double bits_n = double(mpz_sizeinbase(n.get_mpz_t(), 2));
  double bits_x = std::log2(double(X)) + 1;
  double cost = bits_n * double(e.den) + bits_x * double(std::abs(e.num));
  if (cost <= 65536.0) {
    mpz_class lhs, rhs, xx(X);
    mpz_pow_ui(lhs.get_mpz_t(), n.get_mpz_t(), u64(e.den));
    mpz_pow_ui(rhs.get_mpz_t(), xx.get_mpz_t(), u64(std::abs(e.num)));
    if (e.num < 0) {
      // n^den vs X^{-|num|}  <=>  n^den * X^{|num|} vs 1
      lhs *= rhs;
      rhs = 1;
    }
    int c = cmp(lhs, rhs);
    return c < 0 ? Cmp::less : (c > 0 ? Cmp::greater : Cmp::equal);
  }
  double log_n = std::log(n.get_d());
  if (n.get_d() > 1e300) log_n = double(mpz_sizeinbase(n.get_mpz_t(), 2)) * std::log(2.0);
  return compare_logs(log_n, e.value() * std::log(double(X)));
}
inline Cmp compare_power(u64 n, u64 X, Exponent e) {
  return compare_power(mpz_class(n), X, e);
}

/// Irrational exponents (varpi^{4/3}) only have the log path.
inline Cmp compare_power_real(u64 n, u64 X, double e) {
  return compare_logs(std::log(double(n)), e * std::log(double(X)));
}

// Strict inequalities exclude the boundary and anything indeterminate;
// non-strict ones accept exact equality but not indeterminate.
inline bool below_power(u64 n, u64 X, Exponent e) {
  return compare_power(n, X, e) == Cmp::less;
}
inline bool below_power(const mpz_class& n, u64 X, Exponent e) {
  return compare_power(n, X, e) == Cmp::less;
}
inline bool above_power(u64 n, u64 X, Exponent e) {
  return compare_power(n, X, e) == Cmp::greater;
}
inline bool above_power(const mpz_class& n, u64 X, Exponent e) {
  return compare_power(n, X, e) == Cmp::greater;
}
inline bool at_most_power(u64 n, u64 X, Exponent e) {
  auto c = compare_power(n, X, e);
  return c == Cmp::less || c == Cmp::equal;
}

/// Product of the prime factors p of squarefree d with p <= X^e, decided
/// exactly via compare_power.
inline u64 smooth_part_exp(u64 d, u64 X, Exponent e) {
  auto f = factorize(d);
  require(f.is_squarefree(), "smooth_part: d must be squarefree");
  u64 s = 1;
  for (const auto& pp : f.factors)
    if (at_most_power(pp.prime, X, e)) s *= pp.prime;
  return s;
}

// ---------------------------------------------------------------------------
// Parameter set.

inline constexpr Exponent kDefaultVarpi{1, 1168};
inline constexpr Exponent kModulusCeiling{293, 584};  // d < X^{293/584}
inline constexpr Exponent kSmoothFloor{71, 584};      // (d, P(X^varpi)) > X^{71/584}

/// Thresholds as exponents of X. D0's exponent varpi^{4/3} is irrational and
/// kept as a double; every other exponent is exact.
struct ParamSet {
  u64 X = 0;
  Exponent varpi = kDefaultVarpi;
  u64 k = 4;
  Exponent theta_k;
  double exp_D0 = 0;  // varpi^{4/3}
  Exponent exp_D1;    // varpi
  Exponent exp_D2;    // 1/2 - 1/(12(k+1))
  Exponent exp_D3;    // 1/2 + 2 varpi
  Exponent exp_Q0;    // 1/(12(k+1))
  double rho = 0;     // X^{-varpi}
  Exponent exp_X1;    // 3/8 + 8 varpi
  Exponent exp_X2;    // 1/2 - 4 varpi

  bool scaled() const { return varpi != kDefaultVarpi; }
  double power(Exponent e) const { return std::pow(double(X), e.value()); }
  double D0() const { return std::pow(double(X), exp_D0); }
  double D1() const { return power(exp_D1); }
  double D2() const { return power(exp_D2); }
  double D3() const { return power(exp_D3); }
  double Q0() const { return power(exp_Q0); }
  double X1() const { return power(exp_X1); }
  double X2() const { return power(exp_X2); }
};

inline ParamSet make_params(u64 X, u64 k, Exponent varpi = kDefaultVarpi) {
  require(X >= 2, "make_params: X must be >= 2");
  require(k >= 1, "make_params: k must be >= 1");
  require(varpi > Exponent(0) && varpi < Exponent(1, 2),
          "make_params: varpi must lie in (0, 1/2)");
  ParamSet p;
  p.X = X;
  p.k = k;
  p.varpi = varpi;
  const i64 kk = i64(k);
  p.theta_k = std::min(Exponent(1, 12 * (kk + 2)), varpi * varpi);
  p.exp_D0 = std::pow(varpi.value(), 4.0 / 3.0);
  p.exp_D1 = varpi;
  p.exp_D2 = Exponent(1, 2) - Exponent(1, 12 * (kk + 1));
  p.exp_D3 = Exponent(1, 2) + Exponent(2) * varpi;
  p.exp_Q0 = Exponent(1, 12 * (kk + 1));
  p.rho = std::pow(double(X), -varpi.value());
  p.exp_X1 = Exponent(3, 8) + Exponent(8) * varpi;
  p.exp_X2 = Exponent(1, 2) - Exponent(4) * varpi;
  return p;
}

}  // namespace dival
