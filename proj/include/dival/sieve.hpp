#pragma once

// Segmented sieving of arithmetic-function tables over [lo, hi], residue-class
// sums over a table, and the DVL1 binary table format.

#include <array>
#include <cstring>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dival/arith.hpp"
#include "dival/numeric.hpp"

namespace dival {

enum class FunctionKind : std::uint8_t {
  tau_k = 1,
  von_mangoldt = 2,
  moebius = 3,
  euler_phi = 4,
  unit = 5,
};

struct TableKind {
  FunctionKind fn = FunctionKind::unit;
  unsigned k = 0;  // only meaningful for tau_k

  static TableKind tau(unsigned k) { return {FunctionKind::tau_k, k}; }
  static TableKind von_mangoldt() { return {FunctionKind::von_mangoldt, 0}; }
  static TableKind moebius() { return {FunctionKind::moebius, 0}; }
  static TableKind euler_phi() { return {FunctionKind::euler_phi, 0}; }
  static TableKind unit() { return {FunctionKind::unit, 0}; }

  bool exact() const { return fn != FunctionKind::von_mangoldt; }
  std::string name() const {
    switch (fn) {
      case FunctionKind::tau_k: return "tau_" + std::to_string(k);
      case FunctionKind::von_mangoldt: return "von_mangoldt";
      case FunctionKind::moebius: return "moebius";
      case FunctionKind::euler_phi: return "euler_phi";
      case FunctionKind::unit: return "unit";
    }
    return "?";
  }
  friend bool operator==(const TableKind&, const TableKind&) = default;
};

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr u64 kDefaultMemoryBudget = u64{2} << 30;  // 2 GiB
inline constexpr u64 kMaxSieveBound = 1'000'000'000;
// value array plus the cofactor scratch used while sieving
inline constexpr u64 kSieveBytesPerEntry = 16;

struct SieveOptions {
  u64 memory_budget = kDefaultMemoryBudget;
};

/// Values of one arithmetic function on [lo, hi]. Integer-valued kinds live
/// in `ints`, the von Mangoldt function (log p) in `reals`. Immutable once
/// built.
class ArithmeticTable {
 public:
  ArithmeticTable() = default;
  ArithmeticTable(TableKind kind, u64 lo, u64 hi, std::vector<i64> ints,
                  std::vector<double> reals)
      : kind_(kind), lo_(lo), hi_(hi), ints_(std::move(ints)),
        reals_(std::move(reals)) {
    require(lo_ >= 1 && lo_ <= hi_, "ArithmeticTable: need 1 <= lo <= hi");
    require((kind_.exact() ? ints_.size() : reals_.size()) == hi_ - lo_ + 1,
            "ArithmeticTable: value count does not match range");
  }

  TableKind kind() const { return kind_; }
  u64 lo() const { return lo_; }
  u64 hi() const { return hi_; }
  std::size_t size() const { return std::size_t(hi_ - lo_ + 1); }
  bool exact() const { return kind_.exact(); }
  bool contains(u64 n) const { return n >= lo_ && n <= hi_; }

  i64 exact_at(u64 n) const {
    require(exact(), "ArithmeticTable: von Mangoldt values are not exact");
    return ints_[n - lo_];
  }
  double at(u64 n) const {
    return exact() ? double(ints_[n - lo_]) : reals_[n - lo_];
  }
  std::span<const i64> ints() const { return ints_; }
  std::span<const double> reals() const { return reals_; }

  friend bool operator==(const ArithmeticTable&, const ArithmeticTable&) = default;

 private:
  TableKind kind_{};
  u64 lo_ = 1, hi_ = 1;
  std::vector<i64> ints_;
  std::vector<double> reals_;
};

namespace detail {

inline i64 local_value(TableKind kind, u64 p, unsigned e) {
  switch (kind.fn) {
    case FunctionKind::tau_k: {
      u128 t = tau_k_prime_power(e, kind.k);
      if (t > u128(INT64_MAX))
        throw arith_overflow_error("sieve: tau_k value exceeds 64 bits");
      return i64(t);
    }
    case FunctionKind::moebius: return e == 1 ? -1 : 0;
    case FunctionKind::euler_phi: {
      i64 v = i64(p - 1);
      for (unsigned i = 1; i < e; ++i) v *= i64(p);
      return v;
    }
    default: return 1;
  }
}

}  // namespace detail

/// Sieves one function on [lo, hi]. Every n is reduced by the primes up to
/// sqrt(hi), each prime contributing its prime-power factor; whatever
/// cofactor survives is a single prime > sqrt(hi).
inline ArithmeticTable sieve_table(TableKind kind, u64 lo, u64 hi,
                                   const SieveOptions& opts = {}) {
  require(lo >= 1 && lo <= hi, "sieve_table: need 1 <= lo <= hi");
  require(hi <= kMaxSieveBound, "sieve_table: hi exceeds 10^9");
  if (kind.fn == FunctionKind::tau_k) require(kind.k >= 1, "sieve_table: k must be >= 1");
  const u64 len = hi - lo + 1;
  if (len > opts.memory_budget / kSieveBytesPerEntry)
    throw budget_error("sieve_table: [" + std::to_string(lo) + ", " +
                       std::to_string(hi) +
                       "] exceeds the memory budget; use sieve_blocks");

  if (kind.fn == FunctionKind::unit)
    return {kind, lo, hi, std::vector<i64>(len, 1), {}};

  std::vector<u64> rem(len);
  for (u64 i = 0; i < len; ++i) rem[i] = lo + i;
  const auto primes = primes_up_to(isqrt(hi));

  if (kind.fn == FunctionKind::von_mangoldt) {
    // Lambda(n) = log p iff n = p^e: track the first prime found and whether
    // a second distinct prime shows up.
    std::vector<u64> first(len, 0);
    std::vector<bool> multi(len, false);
    for (u64 p : primes) {
      for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
        u64 i = m - lo;
        while (rem[i] % p == 0) rem[i] /= p;
        if (first[i] == 0) first[i] = p;
        else multi[i] = true;
      }
    }
    std::vector<double> vals(len, 0.0);
    for (u64 i = 0; i < len; ++i) {
      if (rem[i] > 1) {
        if (first[i] == 0) first[i] = rem[i];
        else multi[i] = true;
      }
      if (first[i] != 0 && !multi[i]) vals[i] = std::log(double(first[i]));
    }
    return {kind, lo, hi, {}, std::move(vals)};
  }

  std::vector<i64> vals(len, 1);
  for (u64 p : primes) {
    for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
      u64 i = m - lo;
      unsigned e = 0;
      while (rem[i] % p == 0) {
        rem[i] /= p;
        ++e;
      }
      vals[i] *= detail::local_value(kind, p, e);
    }
  }
  for (u64 i = 0; i < len; ++i)
    if (rem[i] > 1) vals[i] *= detail::local_value(kind, rem[i], 1);
  return {kind, lo, hi, std::move(vals), {}};
}

/// Block mode: sieves [lo, hi] in consecutive blocks of `block` entries and
/// hands each finished table to `sink` in ascending order.
inline void sieve_blocks(TableKind kind, u64 lo, u64 hi, u64 block,
                         const std::function<void(const ArithmeticTable&)>& sink,
                         const SieveOptions& opts = {}) {
  require(block >= 1, "sieve_blocks: block size must be positive");
  for (u64 start = lo; start <= hi;) {
    u64 end = std::min(hi, start + block - 1);
    sink(sieve_table(kind, start, end, opts));
    if (end == hi) break;
    start = end + 1;
  }
}

/// Concatenates adjacent tables of the same kind into one.
inline ArithmeticTable concat(std::span<const ArithmeticTable> parts) {
  require(!parts.empty(), "concat: no tables");
  std::vector<i64> ints;
  std::vector<double> reals;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& t = parts[i];
    require(t.kind() == parts[0].kind(), "concat: mixed kinds");
    if (i > 0) require(t.lo() == parts[i - 1].hi() + 1, "concat: tables not adjacent");
    ints.insert(ints.end(), t.ints().begin(), t.ints().end());
    reals.insert(reals.end(), t.reals().begin(), t.reals().end());
  }
  return {parts[0].kind(), parts.front().lo(), parts.back().hi(), std::move(ints),
          std::move(reals)};
}

// ---------------------------------------------------------------------------
// Sums over residue classes.

/// Sum of table values: exact for integer kinds, compensated double for
/// von Mangoldt. `real` is populated in both cases.
struct TableSum {
  bool exact = true;
  i128 integer = 0;
  double real = 0.0;

  mpz_class mpz() const {
    require(exact, "TableSum: inexact sum has no integer value");
    return to_mpz(integer);
  }
};

/// Per-residue sums: entry r is the sum of f(n) over table n with n = r mod d.
struct ResidueSums {
  u64 modulus = 1;
  bool exact = true;
  std::vector<i128> integer;
  std::vector<double> real;

  TableSum at(u64 r) const {
    return exact ? TableSum{true, integer[r], double(integer[r])}
                 : TableSum{false, 0, real[r]};
  }
};

inline ResidueSums residue_sums(const ArithmeticTable& t, u64 d) {
  require(d >= 1, "residue_sums: d must be >= 1");
  ResidueSums rs;
  rs.modulus = d;
  rs.exact = t.exact();
  u64 r = t.lo() % d;
  if (t.exact()) {
    rs.integer.assign(d, 0);
    for (i64 v : t.ints()) {
      rs.integer[r] += v;
      if (++r == d) r = 0;
    }
  } else {
    std::vector<CompensatedSum> acc(d);
    for (double v : t.reals()) {
      acc[r] += v;
      if (++r == d) r = 0;
    }
    rs.real.resize(d);
    for (u64 i = 0; i < d; ++i) rs.real[i] = acc[i].value();
  }
  return rs;
}

/// Sum of f(n) over the table range with n = a (mod d).
inline TableSum ap_sum(const ArithmeticTable& t, u64 d, u64 a) {
  require(d >= 1 && a < d, "ap_sum: need 0 <= a < d");
  TableSum s;
  s.exact = t.exact();
  u64 first = t.lo() + (a + d - t.lo() % d) % d;
  if (t.exact()) {
    for (u64 n = first; n <= t.hi(); n += d) s.integer += t.exact_at(n);
    s.real = double(s.integer);
  } else {
    CompensatedSum acc;
    for (u64 n = first; n <= t.hi(); n += d) acc += t.at(n);
    s.real = acc.value();
  }
  return s;
}

inline TableSum full_sum(const ArithmeticTable& t) { return ap_sum(t, 1, 0); }

/// Sum of f(n) over the table range with gcd(n, d) = 1.
inline TableSum coprime_sum(const ArithmeticTable& t, u64 d) {
  require(d >= 1, "coprime_sum: d must be >= 1");
  auto rs = residue_sums(t, d);
  TableSum s;
  s.exact = t.exact();
  CompensatedSum acc;
  for (u64 r = 0; r < d; ++r) {
    if (std::gcd(r, d) != 1) continue;
    if (s.exact) s.integer += rs.integer[r];
    else acc += rs.real[r];
  }
  s.real = s.exact ? double(s.integer) : acc.value();
  return s;
}

/// Ratio of the arithmetic-progression sum of tau_j(n)^nu over [N, N']
/// against (N' - N)/phi(d) * L^{j^nu - 1}, with L = log N'. Diagnostic only.
inline double shiu_ratio(unsigned j, unsigned nu, u64 N, u64 Nprime, u64 d, i64 c) {
  require(j >= 1 && nu >= 1, "shiu_ratio: j, nu must be >= 1");
  require(N >= 1 && N < Nprime, "shiu_ratio: need 1 <= N < N'");
  require(d >= 1 && gcd_signed(c, d) == 1, "shiu_ratio: need gcd(c, d) = 1");
  require(Nprime - N > d, "shiu_ratio: need N' - N > d");
  auto t = sieve_table(TableKind::tau(j), N, Nprime);
  const u64 a = mod_floor(c, d);
  CompensatedSum lhs;
  u64 first = N + (a + d - N % d) % d;
  for (u64 n = first; n <= Nprime; n += d)
    lhs += std::pow(double(t.exact_at(n)), double(nu));
  double power = std::pow(double(j), double(nu)) - 1.0;
  double L = std::log(double(Nprime));
  double norm = double(Nprime - N) / double(euler_phi(d)) * std::pow(L, power);
  return lhs.value() / norm;
}

// ---------------------------------------------------------------------------
// DVL1 binary format: magic "DVL1", kind tag u8, k u8, lo u64, hi u64, then
// hi - lo + 1 little-endian 8-byte values (two's-complement i64, or IEEE-754
// binary64 for von Mangoldt).

inline constexpr std::array<char, 4> kTableMagic{'D', 'V', 'L', '1'};

namespace detail {
inline void put_le(std::ostream& os, u64 v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(char((v >> (8 * i)) & 0xff));
}
inline u64 get_le(std::istream& is, int bytes) {
  u64 v = 0;
  for (int i = 0; i < bytes; ++i) {
    int c = is.get();
    if (c == std::char_traits<char>::eof()) throw format_error("DVL1: truncated input");
    v |= u64(std::uint8_t(c)) << (8 * i);
  }
  return v;
}
}  // namespace detail

inline void dump_table(std::ostream& os, const ArithmeticTable& t) {
  os.write(kTableMagic.data(), kTableMagic.size());
  detail::put_le(os, u64(t.kind().fn), 1);
  detail::put_le(os, t.kind().k, 1);
  detail::put_le(os, t.lo(), 8);
  detail::put_le(os, t.hi(), 8);
  if (t.exact()) {
    for (i64 v : t.ints()) detail::put_le(os, u64(v), 8);
  } else {
    for (double v : t.reals()) {
      u64 bits;
      std::memcpy(&bits, &v, sizeof bits);
      detail::put_le(os, bits, 8);
    }
  }
}

inline ArithmeticTable load_table(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kTableMagic) throw format_error("DVL1: bad magic");
  auto tag = detail::get_le(is, 1);
  if (tag < 1 || tag > 5) throw format_error("DVL1: unknown kind tag");
  TableKind kind{FunctionKind(tag), unsigned(detail::get_le(is, 1))};
  u64 lo = detail::get_le(is, 8);
  u64 hi = detail::get_le(is, 8);
  if (lo < 1 || hi < lo || hi > kMaxSieveBound) throw format_error("DVL1: bad range");
  u64 len = hi - lo + 1;
  std::vector<i64> ints;
  std::vector<double> reals;
  if (kind.exact()) {
    ints.resize(len);
    for (auto& v : ints) v = i64(detail::get_le(is, 8));
  } else {
    reals.resize(len);
    for (auto& v : reals) {
      u64 bits = detail::get_le(is, 8);
      std::memcpy(&v, &bits, sizeof v);
    }
  }
  return {kind, lo, hi, std::move(ints), std::move(reals)};
}

}  // namespace dival
