#pragma once

// Bilinear sums over the hyperbola m = a n (mod d) and their mean square over
// reduced residues and moduli.

#include <cmath>
#include <complex>
#include <vector>

#include "dival/characters.hpp"
#include "dival/parallel.hpp"
#include "dival/sieve.hpp"

namespace dival {

enum class BilinearVariant { unrestricted, coprime_restricted };

inline const char* to_string(BilinearVariant v) {
  return v == BilinearVariant::unrestricted ? "unrestricted" : "coprime_restricted";
}

/// E(f1, f2; X, d, a). Exact when both tables are integer-valued; otherwise
/// only `real` is meaningful.
struct BilinearRecord {
  u64 d = 1;
  u64 a = 0;
  BilinearVariant variant = BilinearVariant::unrestricted;
  bool exact = true;
  mpq_class e_value;
  double real = 0;
};

/// Both tables bucketed by residue mod d, so each E is an O(d) inner product.
class BilinearProfile {
 public:
  BilinearProfile(const ArithmeticTable& t1, const ArithmeticTable& t2, u64 d)
      : d_(d), phi_(euler_phi(d)), s1_(residue_sums(t1, d)), s2_(residue_sums(t2, d)) {
    require(t1.lo() == 1 && t2.lo() == 1, "bilinear_E: tables must start at n = 1");
    exact_ = s1_.exact && s2_.exact;
    if (exact_) {
      i128 c1 = 0, c2 = 0;
      for (u64 r = 0; r < d; ++r)
        if (std::gcd(r, d) == 1) {
          c1 += s1_.integer[r];
          c2 += s2_.integer[r];
        }
      main_num_ = to_mpz(c1) * to_mpz(c2);
    } else {
      CompensatedSum c1, c2;
      for (u64 r = 0; r < d; ++r)
        if (std::gcd(r, d) == 1) {
          c1 += s1_.at(r).real;
          c2 += s2_.at(r).real;
        }
      main_real_ = c1.value() * c2.value() / double(phi_);
    }
  }

  u64 modulus() const { return d_; }

  BilinearRecord at(i64 a, BilinearVariant variant) const {
    require(gcd_signed(a, d_) == 1, "bilinear_E: gcd(a, d) must be 1");
    const u64 am = mod_floor(a, d_);
    BilinearRecord rec{d_, am, variant, exact_, 0, 0};
    const bool restrict = variant == BilinearVariant::coprime_restricted;
    if (exact_) {
      mpz_class pairs = 0;
      for (u64 s = 0; s < d_; ++s) {
        if (restrict && std::gcd(s, d_) != 1) continue;
        const u64 m = mulmod(am, s, d_);
        if (s1_.integer[m] == 0 || s2_.integer[s] == 0) continue;
        pairs += to_mpz(s1_.integer[m]) * to_mpz(s2_.integer[s]);
      }
      rec.e_value = mpq_class(pairs * phi_ - main_num_, mpz_class(phi_));
      rec.e_value.canonicalize();
      rec.real = rec.e_value.get_d();
    } else {
      CompensatedSum pairs;
      for (u64 s = 0; s < d_; ++s) {
        if (restrict && std::gcd(s, d_) != 1) continue;
        pairs += s1_.at(mulmod(am, s, d_)).real * s2_.at(s).real;
      }
      rec.real = pairs.value() - main_real_;
    }
    return rec;
  }

 private:
  u64 d_;
  u64 phi_;
  ResidueSums s1_, s2_;
  bool exact_ = true;
  mpz_class main_num_;  // (sum_{(m,d)=1} f1)(sum_{(n,d)=1} f2), to be divided by phi
  double main_real_ = 0;
};

inline BilinearRecord bilinear_E(const ArithmeticTable& t1, const ArithmeticTable& t2, u64 d,
                                 i64 a, BilinearVariant variant) {
  require(d >= 1, "bilinear_E: d must be >= 1");
  require(gcd_signed(a, d) == 1, "bilinear_E: gcd(a, d) must be 1");
  return BilinearProfile(t1, t2, d).at(a, variant);
}

/// (1/phi(d)) sum over nonprincipal chi of conj(chi(a)) psi1(chi) conj(psi2(chi))
/// with psi_i(chi) = sum f_i(n) chi(n); equals the coprime-restricted E.
inline std::complex<double> bilinear_via_characters(const ArithmeticTable& t1,
                                                    const ArithmeticTable& t2, u64 d, i64 a) {
  require(gcd_signed(a, d) == 1, "bilinear_via_characters: gcd(a, d) must be 1");
  auto g = std::make_shared<const DirichletGroup>(d);
  CompensatedComplexSum acc;
  for (const auto& chi : enumerate_characters(g)) {
    if (chi.is_principal()) continue;
    acc += std::conj(chi(a)) * char_sum(t1, chi) * std::conj(char_sum(t2, chi));
  }
  return acc.value() / double(g->order());
}

enum class SecondFactor { tau_k, von_mangoldt };

struct Theorem14Report {
  u64 k = 0, X = 0, D = 0;
  SecondFactor second = SecondFactor::tau_k;
  BilinearVariant variant = BilinearVariant::unrestricted;
  bool exact = true;
  mpq_class lhs;        // exact when exact
  double lhs_real = 0;
  double rhs = 0;       // X^{4 - 1/(3(k+4))}
  double ratio = 0;
};

/// sum_{d <= D} sum over reduced a of E(tau_k, f2; X, d, a)^2 with f2 = tau_k
/// or Lambda.
inline Theorem14Report theorem14_experiment(u64 k, u64 X, u64 D, SecondFactor second,
                                            BilinearVariant variant = BilinearVariant::unrestricted,
                                            unsigned threads = 1) {
  require(k >= 1 && X >= 1 && D >= 1, "theorem14_experiment: need k, X, D >= 1");
  const auto t1 = sieve_table(TableKind::tau(unsigned(k)), 1, X);
  const auto t2 = second == SecondFactor::tau_k ? t1
                                                : sieve_table(TableKind::von_mangoldt(), 1, X);
  const bool exact = second == SecondFactor::tau_k;
  struct Part {
    mpq_class exact_sum;
    double real_sum = 0;
  };
  auto parts = parallel_map(
      D,
      [&](std::size_t i) {
        const u64 d = u64(i) + 1;
        BilinearProfile prof(t1, t2, d);
        Part p{0, 0};
        CompensatedSum acc;
        for (u64 a = 0; a < d; ++a) {
          if (std::gcd(a, d) != 1) continue;
          auto rec = prof.at(i64(a), variant);
          if (exact) p.exact_sum += rec.e_value * rec.e_value;
          else acc += rec.real * rec.real;
        }
        p.real_sum = exact ? p.exact_sum.get_d() : acc.value();
        return p;
      },
      threads);
  Theorem14Report rep;
  rep.k = k;
  rep.X = X;
  rep.D = D;
  rep.second = second;
  rep.variant = variant;
  rep.exact = exact;
  rep.lhs = 0;
  CompensatedSum real;
  for (const auto& p : parts) {
    if (exact) rep.lhs += p.exact_sum;
    real += p.real_sum;
  }
  rep.lhs_real = exact ? rep.lhs.get_d() : real.value();
  rep.rhs = std::pow(double(X), 4.0 - 1.0 / (3.0 * double(k + 4)));
  rep.ratio = rep.lhs_real / rep.rhs;
  return rep;
}

}  // namespace dival
