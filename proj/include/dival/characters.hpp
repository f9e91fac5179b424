#pragma once

// Dirichlet characters mod d through the CRT decomposition of (Z/dZ)^* into
// cyclic factors with explicit generators: one primitive root per odd prime
// power, and <-1, 5> for 2^e (e >= 3). A character is an exponent vector over
// those generators; values are exact rational angles num/lambda(d).

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dival/arith.hpp"
#include "dival/numeric.hpp"
#include "dival/sieve.hpp"

namespace dival {

inline constexpr u64 kMaxCharacterModulus = 1'000'000;

/// Smallest g that generates (Z/p^2 Z)^*, hence (Z/p^e Z)^* for every e.
/// Using one generator for every power of p keeps characters mod p^e and
/// their primitive versions mod p^f on the same discrete-log coordinates.
inline u64 primitive_root_odd(u64 p) {
  const u64 p2 = p * p;
  const u64 order = p * (p - 1);
  const auto phi_factors = factorize(order).primes();
  for (u64 g = 2; g < p2; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (u64 q : phi_factors)
      if (powmod(g, order / q, p2) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root_odd: none found");
}

/// One cyclic factor of (Z/dZ)^*: the subgroup generated by `generator`
/// inside (Z/p^e Z)^*, with a discrete-log table indexed by n mod p^e.
struct CyclicComponent {
  u64 prime = 0;
  unsigned exponent = 0;  // e in p^e
  u64 prime_power = 1;
  u64 generator = 1;
  u64 order = 1;
  bool two_adic_sign = false;  // the <-1> factor of (Z/2^e Z)^*
  std::vector<i64> log;        // -1 on non-units
};

class DirichletGroup {
 public:
  explicit DirichletGroup(u64 d) : modulus_(d) {
    require(d >= 1, "DirichletGroup: modulus must be >= 1");
    require(d <= kMaxCharacterModulus, "DirichletGroup: modulus above 10^6");
    auto f = factorize(d);
    for (const auto& [p, e] : f.factors) {
      u64 pe = 1;
      for (unsigned i = 0; i < e; ++i) pe *= p;
      if (p == 2) add_two_adic(e, pe);
      else add_odd(p, e, pe);
    }
    order_ = euler_phi(f);
    lambda_ = 1;
    for (const auto& c : comps_) lambda_ = std::lcm(lambda_, c.order);
    const std::size_t nc = comps_.size();
    unit_logs_.assign(d * nc, -1);
    is_unit_.assign(d, false);
    for (u64 r = 0; r < d; ++r) {
      if (std::gcd(r, d) != 1) continue;
      is_unit_[r] = true;
      for (std::size_t i = 0; i < nc; ++i)
        unit_logs_[r * nc + i] = comps_[i].log[r % comps_[i].prime_power];
    }
    roots_ = std::make_shared<UnitRoots>(lambda_);
  }

  u64 modulus() const { return modulus_; }
  u64 order() const { return order_; }    // phi(d)
  u64 exponent() const { return lambda_; }  // lcm of component orders
  std::span<const CyclicComponent> components() const { return comps_; }
  bool is_unit(u64 r) const { return is_unit_[r % modulus_]; }
  std::span<const i64> logs_of(u64 r) const {
    const std::size_t nc = comps_.size();
    return {unit_logs_.data() + (r % modulus_) * nc, nc};
  }
  const UnitRoots& roots() const { return *roots_; }

 private:
  void add_odd(u64 p, unsigned e, u64 pe) {
    CyclicComponent c{p, e, pe, primitive_root_odd(p) % pe, pe / p * (p - 1), false, {}};
    c.log.assign(pe, -1);
    u64 v = 1;
    for (u64 m = 0; m < c.order; ++m) {
      c.log[v] = i64(m);
      v = mulmod(v, c.generator, pe);
    }
    comps_.push_back(std::move(c));
  }

  void add_two_adic(unsigned e, u64 pe) {
    if (e == 1) return;  // (Z/2Z)^* is trivial
    CyclicComponent sign{2, e, pe, pe - 1, 2, true, {}};
    sign.log.assign(pe, -1);
    if (e == 2) {
      sign.log[1] = 0;
      sign.log[3] = 1;
      comps_.push_back(std::move(sign));
      return;
    }
    CyclicComponent five{2, e, pe, 5, pe / 4, false, {}};
    five.log.assign(pe, -1);
    u64 v = 1;
    for (u64 m = 0; m < five.order; ++m) {
      // n = +-5^m mod 2^e
      sign.log[v] = 0;
      five.log[v] = i64(m);
      sign.log[pe - v] = 1;
      five.log[pe - v] = i64(m);
      v = mulmod(v, 5, pe);
    }
    comps_.push_back(std::move(sign));
    comps_.push_back(std::move(five));
  }

  u64 modulus_;
  u64 order_ = 1;
  u64 lambda_ = 1;
  std::vector<CyclicComponent> comps_;
  std::vector<i64> unit_logs_;
  std::vector<bool> is_unit_;
  std::shared_ptr<const UnitRoots> roots_;
};

/// chi(n) as an exact angle: value = e(num/den), or zero off the units.
struct CharValue {
  bool zero = true;
  u64 num = 0;
  u64 den = 1;
  std::complex<double> value{0.0, 0.0};
};

class Character {
 public:
  Character(std::shared_ptr<const DirichletGroup> group, std::vector<u64> exponents)
      : group_(std::move(group)), exps_(std::move(exponents)) {
    auto comps = group_->components();
    require(exps_.size() == comps.size(), "Character: exponent vector size mismatch");
    for (std::size_t i = 0; i < comps.size(); ++i)
      require(exps_[i] < comps[i].order, "Character: exponent out of range");
    conductor_ = compute_conductor();
  }

  u64 modulus() const { return group_->modulus(); }
  const DirichletGroup& group() const { return *group_; }
  std::shared_ptr<const DirichletGroup> group_ptr() const { return group_; }
  std::span<const u64> exponents() const { return exps_; }
  u64 conductor() const { return conductor_; }
  bool is_principal() const {
    return std::all_of(exps_.begin(), exps_.end(), [](u64 a) { return a == 0; });
  }
  bool is_primitive() const { return conductor_ == modulus(); }

  /// Angle numerator over group().exponent(), or nullopt when gcd(n, d) > 1.
  std::optional<u64> angle(i64 n) const {
    const u64 d = modulus();
    const u64 r = mod_floor(n, d);
    if (!group_->is_unit(r)) return std::nullopt;
    const u64 lambda = group_->exponent();
    auto logs = group_->logs_of(r);
    auto comps = group_->components();
    u128 num = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      num += u128(exps_[i]) * u64(logs[i]) % comps[i].order * (lambda / comps[i].order);
    return u64(num % lambda);
  }

  CharValue value(i64 n) const {
    auto a = angle(n);
    if (!a) return {};
    const u64 lambda = group_->exponent();
    u64 g = std::gcd(*a, lambda);
    return {false, *a / g, lambda / g, group_->roots()[*a]};
  }
  std::complex<double> operator()(i64 n) const { return value(n).value; }

  Character conjugate() const {
    auto comps = group_->components();
    std::vector<u64> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = exps_[i] == 0 ? 0 : comps[i].order - exps_[i];
    return {group_, std::move(e)};
  }

  friend bool operator==(const Character& a, const Character& b) {
    return a.modulus() == b.modulus() && a.exps_ == b.exps_;
  }

 private:
  // Conductor component by component. For an odd p^e factor with exponent a,
  // chi is trivial on {n = 1 mod p^f} iff p^{e-f} | a. For 2^e (e >= 3) with
  // exponents (b on -1, c on 5): trivial on {n = 1 mod 2^f}, f >= 3, iff
  // 2^{e-f} | c; on {n = 1 mod 4} iff c = 0; on all odd n iff b = c = 0.
  u64 compute_conductor() const {
    auto comps = group_->components();
    u64 cond = 1;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      if (c.prime == 2) {
        if (c.two_adic_sign) {
          bool has_five = i + 1 < comps.size() && comps[i + 1].prime == 2;
          u64 b = exps_[i];
          u64 five_exp = has_five ? exps_[i + 1] : 0;
          if (five_exp != 0) {
            cond *= two_adic_conductor(c.exponent, five_exp);
          } else if (b != 0) {
            cond *= 4;
          }
        }
        continue;
      }
      u64 a = exps_[i];
      if (a == 0) continue;
      unsigned f = c.exponent;
      u64 shrink = 1;  // p^{e-f}
      while (f > 1 && a % (shrink * c.prime) == 0) {
        shrink *= c.prime;
        --f;
      }
      for (unsigned j = 0; j < f; ++j) cond *= c.prime;
    }
    return cond;
  }

  static u64 two_adic_conductor(unsigned e, u64 c) {
    unsigned f = e;
    u64 shrink = 1;
    while (f > 3 && c % (shrink * 2) == 0) {
      shrink *= 2;
      --f;
    }
    return u64{1} << f;
  }

  std::shared_ptr<const DirichletGroup> group_;
  std::vector<u64> exps_;
  u64 conductor_ = 1;
};

/// All phi(d) characters mod d, principal first, in lexicographic order of
/// exponent vectors.
inline std::vector<Character> enumerate_characters(std::shared_ptr<const DirichletGroup> g) {
  auto comps = g->components();
  std::vector<Character> out;
  out.reserve(g->order());
  std::vector<u64> e(comps.size(), 0);
  while (true) {
    out.emplace_back(g, e);
    std::size_t i = e.size();
    while (i > 0) {
      --i;
      if (++e[i] < comps[i].order) break;
      e[i] = 0;
      if (i == 0) return out;
    }
    if (e.empty()) return out;
  }
}

inline std::vector<Character> enumerate_characters(u64 d) {
  require(d >= 1, "enumerate_characters: d must be >= 1");
  return enumerate_characters(std::make_shared<const DirichletGroup>(d));
}

inline Character principal_character(u64 d) {
  auto g = std::make_shared<const DirichletGroup>(d);
  return {g, std::vector<u64>(g->components().size(), 0)};
}

struct PrimitiveInduction {
  u64 conductor;
  Character primitive;
};

/// The conductor q | d and the primitive character mod q inducing chi.
/// For the principal character this is (1, principal mod 1).
inline PrimitiveInduction conductor_and_primitive(const Character& chi) {
  const u64 q = chi.conductor();
  auto target = std::make_shared<const DirichletGroup>(q);
  auto src = chi.group().components();
  auto dst = target->components();
  auto exps = chi.exponents();
  std::vector<u64> out(dst.size(), 0);
  // Components of the target are a subsequence of the source's: same primes,
  // same generators, smaller prime powers.
  std::size_t j = 0;
  for (std::size_t i = 0; i < src.size() && j < dst.size(); ++i) {
    const auto& s = src[i];
    const auto& t = dst[j];
    if (s.prime != t.prime) continue;
    if (s.prime == 2) {
      if (s.two_adic_sign != t.two_adic_sign) continue;
      if (s.two_adic_sign) {
        out[j++] = exps[i];
      } else {
        out[j++] = exps[i] / (s.order / t.order);
      }
      continue;
    }
    out[j++] = exps[i] / (s.prime_power / t.prime_power);
  }
  require(j == dst.size(), "conductor_and_primitive: component mismatch");
  return {q, Character(target, std::move(out))};
}

/// Sum over table n with gcd(n, coprime_to) = 1 of f(n) chi(n), compensated.
inline std::complex<double> char_sum(const ArithmeticTable& t, const Character& chi,
                                     u64 coprime_to = 1) {
  require(coprime_to >= 1, "char_sum: coprime_to must be >= 1");
  const u64 d = chi.modulus();
  const u64 m = std::lcm(d, coprime_to);
  const auto& roots = chi.group().roots();
  CompensatedComplexSum acc;
  if (m <= t.size()) {
    auto rs = residue_sums(t, m);
    for (u64 r = 0; r < m; ++r) {
      if (std::gcd(r, coprime_to) != 1) continue;
      auto a = chi.angle(i64(r));
      if (!a) continue;
      double w = rs.exact ? double(rs.integer[r]) : rs.real[r];
      if (w != 0.0) acc += w * roots[*a];
    }
  } else {
    for (u64 n = t.lo(); n <= t.hi(); ++n) {
      if (std::gcd(n, coprime_to) != 1) continue;
      auto a = chi.angle(i64(n));
      if (!a) continue;
      double w = t.at(n);
      if (w != 0.0) acc += w * roots[*a];
    }
  }
  return acc.value();
}

/// sum_{q<=Q} (q/phi(q)) sum*_{chi mod q} |sum_{n<=N} a_n chi(n)|^2 divided by
/// (Q^2 + N - 1) sum |a_n|^2, with a_n = seq[n-1]. The sharp large sieve
/// says this never exceeds 1.
inline double large_sieve_check(std::span<const std::complex<double>> seq, u64 Q) {
  require(!seq.empty() && Q >= 1, "large_sieve_check: need N, Q >= 1");
  const u64 N = seq.size();
  CompensatedSum energy;
  for (auto z : seq) energy += std::norm(z);
  if (energy.value() == 0.0) return 0.0;
  CompensatedSum lhs;
  for (u64 q = 1; q <= Q; ++q) {
    std::vector<std::complex<double>> buckets(q);
    for (u64 n = 1; n <= N; ++n) buckets[n % q] += seq[n - 1];
    auto g = std::make_shared<const DirichletGroup>(q);
    const auto& roots = g->roots();
    CompensatedSum per_q;
    for (const auto& chi : enumerate_characters(g)) {
      if (!chi.is_primitive()) continue;
      std::complex<double> s{};
      for (u64 r = 0; r < q; ++r) {
        auto a = chi.angle(i64(r));
        if (a) s += buckets[r] * roots[*a];
      }
      per_q += std::norm(s);
    }
    lhs += double(q) / double(g->order()) * per_q.value();
  }
  return lhs.value() / ((double(Q) * double(Q) + double(N) - 1.0) * energy.value());
}

}  // namespace dival
