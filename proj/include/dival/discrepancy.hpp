#pragma once

// Exact discrepancies Delta(f; X, d, a), their character expansion, the
// smooth-moduli family, the factorization of family moduli, the
// finer-than-dyadic box decomposition and the case classifier.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dival/arith.hpp"
#include "dival/characters.hpp"
#include "dival/parallel.hpp"
#include "dival/sieve.hpp"

namespace dival {

struct hypothesis_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Delta = ap_part - main_part with main_part = coprime_sum / phi(d), exact.
struct DiscrepancyRecord {
  u64 d = 1;
  u64 a = 0;
  mpq_class delta;
  mpz_class ap_part;
  mpq_class main_part;
};

namespace detail {
inline void require_full_range(const ArithmeticTable& t, const char* who) {
  require(t.lo() == 1, std::string(who) + ": table must start at n = 1");
  require(t.exact(), std::string(who) + ": exact discrepancies need an integer-valued table");
}
}  // namespace detail

/// All discrepancies for one modulus, sharing one pass of residue bucketing.
class DiscrepancyProfile {
 public:
  DiscrepancyProfile(const ArithmeticTable& t, u64 d)
      : d_(d), phi_(euler_phi(d)), sums_(residue_sums(t, d)) {
    detail::require_full_range(t, "delta");
    i128 coprime = 0;
    for (u64 r = 0; r < d; ++r)
      if (std::gcd(r, d) == 1) coprime += sums_.integer[r];
    main_ = mpq_class(to_mpz(coprime), mpz_class(phi_));
    main_.canonicalize();
  }

  u64 modulus() const { return d_; }
  u64 phi() const { return phi_; }
  const mpq_class& main_part() const { return main_; }

  DiscrepancyRecord at(i64 a) const {
    require(gcd_signed(a, d_) == 1, "delta: gcd(a, d) must be 1 (Delta undefined on non-reduced classes)");
    u64 r = mod_floor(a, d_);
    DiscrepancyRecord rec;
    rec.d = d_;
    rec.a = r;
    rec.ap_part = to_mpz(sums_.integer[r]);
    rec.main_part = main_;
    rec.delta = mpq_class(rec.ap_part) - main_;
    return rec;
  }

  /// Records for every reduced residue, ascending.
  std::vector<DiscrepancyRecord> all() const {
    std::vector<DiscrepancyRecord> out;
    for (u64 r = 0; r < d_; ++r)
      if (std::gcd(r, d_) == 1) out.push_back(at(i64(r)));
    return out;
  }

 private:
  u64 d_;
  u64 phi_;
  ResidueSums sums_;
  mpq_class main_;
};

inline DiscrepancyRecord delta(const ArithmeticTable& t, u64 d, i64 a) {
  require(d >= 1, "delta: d must be >= 1");
  require(gcd_signed(a, d) == 1, "delta: gcd(a, d) must be 1 (Delta undefined on non-reduced classes)");
  return DiscrepancyProfile(t, d).at(a);
}

/// (1/phi(d)) sum over nonprincipal chi of conj(chi(a)) * char_sum(f, chi).
inline std::complex<double> delta_via_characters(const ArithmeticTable& t, u64 d, i64 a) {
  require(t.lo() == 1, "delta_via_characters: table must start at n = 1");
  require(d >= 1 && d <= 10'000, "delta_via_characters: need 1 <= d <= 10^4");
  require(gcd_signed(a, d) == 1, "delta_via_characters: gcd(a, d) must be 1");
  auto g = std::make_shared<const DirichletGroup>(d);
  CompensatedComplexSum acc;
  for (const auto& chi : enumerate_characters(g)) {
    if (chi.is_principal()) continue;
    acc += std::conj(chi(a)) * char_sum(t, chi, 1);
  }
  return acc.value() / double(g->order());
}

// ---------------------------------------------------------------------------
// Moduli family.

struct ModuliFamily {
  ParamSet params;
  i64 a = 1;
  std::vector<u64> members;
};

/// Conditions a modulus must meet; each is strict, boundary excluded.
struct FamilyTest {
  bool coprime = false;
  bool squarefree = false;
  bool below_ceiling = false;     // d < X^{293/584}
  bool small_smooth_part = false; // (d, P(X^{varpi^2})) < X^varpi
  bool large_smooth_part = false; // (d, P(X^varpi)) > X^{71/584}
  bool all() const {
    return coprime && squarefree && below_ceiling && small_smooth_part && large_smooth_part;
  }
};

inline FamilyTest test_family_member(const ParamSet& p, i64 a, u64 d) {
  FamilyTest t;
  t.coprime = gcd_signed(a, d) == 1;
  t.squarefree = is_squarefree(d);
  t.below_ceiling = below_power(d, p.X, kModulusCeiling);
  if (!t.squarefree) return t;
  t.small_smooth_part = below_power(smooth_part_exp(d, p.X, p.varpi * p.varpi), p.X, p.varpi);
  t.large_smooth_part = above_power(smooth_part_exp(d, p.X, p.varpi), p.X, kSmoothFloor);
  return t;
}

/// Largest integer strictly below X^e (0 when X^e <= 1).
inline u64 largest_below_power(u64 X, Exponent e) {
  double guess = std::pow(double(X), e.value());
  if (guess > 9e18) throw precondition_error("exponent range too large to enumerate");
  u64 d = u64(guess) + 2;
  while (d > 0 && !below_power(d, X, e)) --d;
  return d;
}

inline ModuliFamily build_family(const ParamSet& p, i64 a) {
  require(a != 0, "build_family: a must be nonzero");
  ModuliFamily fam{p, a, {}};
  const u64 top = largest_below_power(p.X, kModulusCeiling);
  require(top <= 100'000'000, "build_family: X too large for enumeration of d < X^{293/584}");
  for (u64 d = 1; d <= top; ++d)
    if (test_family_member(p, a, d).all()) fam.members.push_back(d);
  return fam;
}

// ---------------------------------------------------------------------------
// Factorization of family moduli: d = q r with r in (X^{-varpi} R*, R*) and q
// free of primes <= D0.

struct ModulusSplit {
  u64 q = 1;
  u64 r = 1;
  int window = 0;  // which R* window was used (1 or 2)
};

namespace detail {
inline bool log_below(double lhs, double rhs) { return compare_logs(lhs, rhs) == Cmp::less; }
}  // namespace detail

/// Follows the greedy construction: d = d0 d1 d2 with d0 the part over primes
/// <= D0, d1 the primes in (D0, D1] and d2 the rest. Starting from d0
/// (window 1) or d0 d2 (window 2), medium primes are multiplied in ascending
/// order while the product stays below R*.
inline ModulusSplit factorize_modulus(u64 d, double Rstar, const ParamSet& p) {
  auto fail = [](const std::string& why) {
    throw hypothesis_error("factorize_modulus: hypotheses violated: " + why);
  };
  require(Rstar > 0, "factorize_modulus: R* must be positive");
  auto f = factorize(d);
  if (!f.is_squarefree()) fail("d is not squarefree");

  const double logX = std::log(double(p.X));
  const double logR = std::log(Rstar);
  const double v = p.varpi.value();

  if (!above_power(d, p.X, p.exp_D2) || !below_power(d, p.X, p.exp_D3))
    fail("D2 < d < D3 (range)");

  // Prime classes. p <= D0 has an irrational exponent: log path only, and a
  // prime inside the guard band is treated as not <= D0.
  u64 d0 = 1, d2 = 1;
  std::vector<u64> medium;
  for (u64 q : f.primes()) {
    auto c0 = compare_power_real(q, p.X, p.exp_D0);
    if (c0 == Cmp::less) {
      d0 *= q;
    } else if (at_most_power(q, p.X, p.exp_D1)) {
      medium.push_back(q);
    } else {
      d2 *= q;
    }
  }
  u64 d1 = 1;
  for (u64 q : medium) d1 *= q;

  if (!below_power(d0, p.X, p.varpi)) fail("(d, P0) < X^varpi (smooth-part ceiling)");
  if (!above_power(d0 * d1, p.X, Exponent(1, 8) - Exponent(4) * p.varpi))
    fail("(d, P1) > X^{1/8 - 4 varpi} (smooth-part floor)");

  int window = 0;
  auto in_window = [&](Exponent lo, Exponent hi) {
    auto a = compare_logs(logR, lo.value() * logX);
    auto b = compare_logs(logR, hi.value() * logX);
    return a != Cmp::less && a != Cmp::indeterminate && b != Cmp::greater &&
           b != Cmp::indeterminate;
  };
  if (in_window(Exponent(2) * p.varpi, Exponent(45) * p.varpi)) window = 1;
  else if (in_window(Exponent(3, 8) + Exponent(7) * p.varpi, Exponent(1, 2) - Exponent(2) * p.varpi))
    window = 2;
  if (window == 0) fail("R* outside both windows");

  const mpq_class R(Rstar);
  u64 r = window == 1 ? d0 : d0 * d2;
  if (!(mpq_class(r) < R)) fail("starting product d0 (d2) >= R*");
  const u64 reachable = window == 1 ? d0 * d1 : d;
  if (mpq_class(reachable) < R)
    fail(window == 1 ? "walk infeasible: (d, P1) < R*" : "walk infeasible: d < R*");

  for (u64 q : medium) {
    if (!(mpq_class(r) * q < R)) break;
    r *= q;
  }

  ModulusSplit out{d / r, r, window};
  // Postconditions of the construction.
  if (out.q * out.r != d) throw std::logic_error("factorize_modulus: q r != d");
  if (!(mpq_class(r) < R) ||
      !detail::log_below(logR - v * logX, std::log(double(r))))
    fail("no r in (X^{-varpi} R*, R*) reachable by the greedy walk");
  for (u64 q : factorize(out.q).primes())
    if (compare_power_real(q, p.X, p.exp_D0) == Cmp::less)
      throw std::logic_error("factorize_modulus: q has a prime <= D0");
  return out;
}

// ---------------------------------------------------------------------------
// Finer-than-dyadic boxes [(1+rho)^j, (1+rho)^{j+1}).

struct BoxEdge {
  u64 index = 0;  // j
  double value = 1.0;
};

inline double box_edge(double rho, i64 j) { return std::pow(1.0 + rho, double(j)); }

/// Edges (1+rho)^j, j = 0..R with R maximal subject to (1+rho)^R < 2X.
inline std::vector<BoxEdge> finer_partition(u64 X, double rho) {
  require(rho > 0, "finer_partition: rho must be positive");
  require(X >= 1, "finer_partition: X must be >= 1");
  std::vector<BoxEdge> out;
  for (u64 j = 0;; ++j) {
    double e = box_edge(rho, i64(j));
    if (!(e < 2.0 * double(X))) break;
    out.push_back({j, e});
  }
  return out;
}

/// Index j of the box holding m >= 1.
inline i64 box_index(u64 m, double rho) {
  i64 j = i64(std::floor(std::log(double(m)) / std::log1p(rho)));
  while (j > 0 && box_edge(rho, j) > double(m)) --j;
  while (box_edge(rho, j + 1) <= double(m)) ++j;
  return j;
}

enum class BoxConstraint { intersects, contained };

namespace detail {
inline void for_each_ordered_factorization(u64 n, unsigned k, std::vector<u64>& parts,
                                           const std::function<void(const std::vector<u64>&)>& fn) {
  if (k == 1) {
    parts.push_back(n);
    fn(parts);
    parts.pop_back();
    return;
  }
  for (u64 d : divisors(n)) {
    parts.push_back(d);
    for_each_ordered_factorization(n / d, k - 1, parts, fn);
    parts.pop_back();
  }
}
}  // namespace detail

/// Value at n of the sum over box tuples (N_1..N_k), each a power of 1+rho,
/// of chi_{N_k} * ... * chi_{N_1}, restricted to tuples whose product box
/// [N_k...N_1, (1+rho)^k N_k...N_1) meets [N, 2N) (T1) or lies inside it (T2).
/// Every ordered factorization n = n_1...n_k sits in exactly one box tuple,
/// whose product box depends only on J = sum of the box indices.
inline u64 box_sum(u64 n, u64 N, unsigned k, double rho, BoxConstraint constraint) {
  require(n >= 1 && N >= 1 && k >= 1 && rho > 0, "box_sum: bad arguments");
  u64 count = 0;
  std::vector<u64> parts;
  const double lo = double(N), hi = 2.0 * double(N);
  detail::for_each_ordered_factorization(n, k, parts, [&](const std::vector<u64>& ps) {
    i64 J = 0;
    for (u64 m : ps) J += box_index(m, rho);
    double L = box_edge(rho, J);
    double U = box_edge(rho, J + i64(k));
    bool ok = constraint == BoxConstraint::intersects ? (L < hi && U > lo)
                                                      : (L >= lo && U <= hi);
    if (ok) ++count;
  });
  return count;
}

inline u64 t1_value(u64 n, u64 N, unsigned k, double rho) {
  require(N <= n && n < 2 * N, "t1_value: n must lie in [N, 2N)");
  return box_sum(n, N, k, rho, BoxConstraint::intersects);
}
inline u64 t2_value(u64 n, u64 N, unsigned k, double rho) {
  return box_sum(n, N, k, rho, BoxConstraint::contained);
}

// ---------------------------------------------------------------------------
// Case classification of box exponent vectors N_i = X^{nu_i}.

enum class ProofCase { A, B, C };

inline const char* to_string(ProofCase c) {
  switch (c) {
    case ProofCase::A: return "A";
    case ProofCase::B: return "B";
    case ProofCase::C: return "C";
  }
  return "?";
}

inline constexpr std::size_t kMaxCaseLength = 20;

/// nu_1 >= ... >= nu_k >= 0 with sum below 1 + k varpi (the bound
/// 1 - k log(rho)/log X with rho = X^{-varpi}).
struct CaseVector {
  std::vector<double> nu;

  static CaseVector make(std::vector<double> nu, Exponent varpi) {
    require(!nu.empty() && nu.size() <= kMaxCaseLength, "CaseVector: need 1 <= k <= 20");
    double sum = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      require(nu[i] >= 0, "CaseVector: exponents must be nonnegative");
      if (i) require(nu[i] <= nu[i - 1], "CaseVector: exponents must be nonincreasing");
      sum += nu[i];
    }
    require(sum < 1.0 + double(nu.size()) * varpi.value(), "CaseVector: exponent sum too large");
    return {std::move(nu)};
  }
};

/// A: nu_1 >= 5/8 - 8 varpi. Otherwise C if some subset sum lands in
/// [3/8 + 8 varpi, 5/8 - 8 varpi], else B. Exact scan over all 2^k subsets.
inline ProofCase classify_case(const CaseVector& v, Exponent varpi) {
  const auto& nu = v.nu;
  require(!nu.empty() && nu.size() <= kMaxCaseLength, "classify_case: need 1 <= k <= 20");
  const double lo = (Exponent(3, 8) + Exponent(8) * varpi).value();
  const double hi = (Exponent(5, 8) - Exponent(8) * varpi).value();
  if (nu[0] >= hi) return ProofCase::A;
  const std::size_t k = nu.size();
  // sums[mask] extends the sum of mask with its lowest bit cleared
  std::vector<double> sums(std::size_t{1} << k, 0.0);
  for (std::size_t mask = 1; mask < sums.size(); ++mask) {
    std::size_t low = std::size_t(__builtin_ctzll(mask));
    sums[mask] = sums[mask & (mask - 1)] + nu[low];
    if (sums[mask] >= lo && sums[mask] <= hi) return ProofCase::C;
  }
  return ProofCase::B;
}

// ---------------------------------------------------------------------------
// Family-sum experiment.

struct Theorem1Report {
  ParamSet params;
  i64 a = 1;
  std::size_t family_size = 0;
  mpq_class lhs;   // sum over the family of |Delta(tau_k; X, d, a)|
  double rhs = 0;  // X^{1 - theta_k}
  double ratio = 0;
};

inline Theorem1Report theorem1_experiment(const ParamSet& p, i64 a, const ModuliFamily& fam,
                                          const ArithmeticTable& tau, unsigned threads = 1) {
  require(tau.kind() == TableKind::tau(unsigned(p.k)) && tau.lo() == 1 && tau.hi() == p.X,
          "theorem1_experiment: table must be tau_k on [1, X]");
  auto parts = parallel_map(
      fam.members.size(),
      [&](std::size_t i) {
        mpq_class v = delta(tau, fam.members[i], a).delta;
        return mpq_class(abs(v));
      },
      threads);
  Theorem1Report rep;
  rep.params = p;
  rep.a = a;
  rep.family_size = fam.members.size();
  rep.lhs = 0;
  for (const auto& v : parts) rep.lhs += v;
  rep.rhs = std::pow(double(p.X), 1.0 - p.theta_k.value());
  rep.ratio = rep.lhs.get_d() / rep.rhs;
  return rep;
}

inline Theorem1Report theorem1_experiment(const ParamSet& p, i64 a, const ModuliFamily& fam,
                                          unsigned threads = 1) {
  return theorem1_experiment(p, a, fam, sieve_table(TableKind::tau(unsigned(p.k)), 1, p.X),
                             threads);
}

}  // namespace dival
