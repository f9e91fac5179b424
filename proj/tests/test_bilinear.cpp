#include <gtest/gtest.h>

#include <random>

#include "dival/bilinear.hpp"

using namespace dival;

namespace {

// E by the double loop over pairs (m, n)
mpq_class e_oracle(const ArithmeticTable& f1, const ArithmeticTable& f2, u64 d, u64 a, bool restrict) {
  const u64 X = f1.hi();
  mpz_class pairs = 0, c1 = 0, c2 = 0;
  for (u64 m = 1; m <= X; ++m)
    for (u64 n = 1; n <= X; ++n) {
      if (m % d != a * n % d) continue;
      if (restrict && std::gcd(m * n, d) != 1) continue;
      pairs += mpz_class(f1.exact_at(m)) * f2.exact_at(n);
    }
  u64 phi = 0;
  for (u64 r = 1; r <= d; ++r) phi += std::gcd(r, d) == 1;
  for (u64 n = 1; n <= X; ++n)
    if (std::gcd(n, d) == 1) {
      c1 += f1.exact_at(n);
      c2 += f2.exact_at(n);
    }
  mpq_class out = mpq_class(pairs) - mpq_class(c1 * c2, mpz_class(phi));
  out.canonicalize();
  return out;
}

}  // namespace

TEST(Bilinear, Examples) {
  auto unit = sieve_table(TableKind::unit(), 1, 4);
  EXPECT_EQ(bilinear_E(unit, unit, 2, 1, BilinearVariant::unrestricted).e_value, 4);
  auto t = sieve_table(TableKind::tau(3), 1, 300);
  for (auto v : {BilinearVariant::unrestricted, BilinearVariant::coprime_restricted})
    EXPECT_EQ(bilinear_E(t, t, 1, 0, v).e_value, 0);
  EXPECT_THROW(bilinear_E(t, t, 6, 3, BilinearVariant::unrestricted), precondition_error);
}

TEST(Bilinear, MatchesPairLoop) {
  auto f1 = sieve_table(TableKind::tau(2), 1, 200);
  auto f2 = sieve_table(TableKind::moebius(), 1, 200);
  for (u64 d = 1; d <= 20; ++d)
    for (u64 a = 0; a < d; ++a) {
      if (std::gcd(a, d) != 1) continue;
      auto u = bilinear_E(f1, f2, d, i64(a), BilinearVariant::unrestricted).e_value;
      auto c = bilinear_E(f1, f2, d, i64(a), BilinearVariant::coprime_restricted).e_value;
      ASSERT_EQ(u, e_oracle(f1, f2, d, a, false)) << d << " " << a;
      ASSERT_EQ(c, e_oracle(f1, f2, d, a, true)) << d << " " << a;
      // the gap is the pairs with gcd(mn, d) > 1
      mpz_class gap = 0;
      for (u64 m = 1; m <= 200; ++m)
        for (u64 n = 1; n <= 200; ++n)
          if (m % d == a * n % d && std::gcd(m * n, d) != 1) gap += mpz_class(f1.exact_at(m)) * f2.exact_at(n);
      ASSERT_EQ(u - c, mpq_class(gap));
    }
}

TEST(Bilinear, CoprimeNullSum) {
  auto t = sieve_table(TableKind::tau(3), 1, 3000);
  auto u = sieve_table(TableKind::unit(), 1, 3000);
  for (u64 d = 1; d <= 50; ++d) {
    mpq_class s = 0;
    for (u64 a = 0; a < d; ++a)
      if (std::gcd(a, d) == 1) s += bilinear_E(t, u, d, i64(a), BilinearVariant::coprime_restricted).e_value;
    ASSERT_EQ(s, 0) << d;
  }
}

TEST(Bilinear, CharacterExpansion) {
  std::mt19937_64 rng(2);
  std::vector<TableKind> kinds{TableKind::tau(2), TableKind::tau(4), TableKind::moebius(),
                               TableKind::euler_phi(), TableKind::unit()};
  for (int i = 0; i < 60; ++i) {
    const u64 X = 50 + rng() % 2000;
    auto f1 = sieve_table(kinds[rng() % kinds.size()], 1, X);
    auto f2 = sieve_table(kinds[rng() % kinds.size()], 1, X);
    const u64 d = 1 + rng() % 30;
    u64 a = rng() % d;
    while (std::gcd(a, d) != 1) a = (a + 1) % d;
    auto e = bilinear_E(f1, f2, d, i64(a), BilinearVariant::coprime_restricted);
    auto z = bilinear_via_characters(f1, f2, d, i64(a));
    const double scale = std::max(1.0, std::abs(e.real));
    ASSERT_NEAR(z.real(), e.real, 1e-8 * scale) << d << " " << a;
    ASSERT_NEAR(z.imag(), 0.0, 1e-8 * scale);
  }
}

TEST(Bilinear, VonMangoldtIsReal) {
  auto t = sieve_table(TableKind::tau(2), 1, 500);
  auto lam = sieve_table(TableKind::von_mangoldt(), 1, 500);
  auto r = bilinear_E(t, lam, 7, 3, BilinearVariant::coprime_restricted);
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(bilinear_via_characters(t, lam, 7, 3).real(), r.real, 1e-8 * std::max(1.0, std::abs(r.real)));
}

TEST(Theorem14, Report) {
  auto one = theorem14_experiment(4, 300, 1, SecondFactor::tau_k);
  EXPECT_EQ(one.lhs, 0);
  double prev = 0;
  for (u64 D : {5u, 20u, 50u}) {
    auto r = theorem14_experiment(4, 1000, D, SecondFactor::tau_k, BilinearVariant::unrestricted, 2);
    EXPECT_GE(r.lhs_real, prev);
    prev = r.lhs_real;
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_NEAR(r.rhs, std::pow(1000.0, 4.0 - 1.0 / 24.0), 1e-9 * r.rhs);
  }
  auto lam = theorem14_experiment(4, 1000, 20, SecondFactor::von_mangoldt);
  EXPECT_FALSE(lam.exact);
  EXPECT_GT(lam.ratio, 0.0);
  // thread count does not change the exact result
  EXPECT_EQ(theorem14_experiment(3, 500, 30, SecondFactor::tau_k, BilinearVariant::coprime_restricted, 1).lhs,
            theorem14_experiment(3, 500, 30, SecondFactor::tau_k, BilinearVariant::coprime_restricted, 3).lhs);
}
