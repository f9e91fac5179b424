#include <gtest/gtest.h>

#include <random>

#include "dival/arith.hpp"

using namespace dival;

namespace {

// ordered k-tuples with product n, counted by recursion over divisors
u64 count_tuples(u64 n, u64 k) {
  if (k == 1) return 1;
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) c += count_tuples(n / d, k - 1);
  return c;
}

}  // namespace

TEST(Factorize, Examples) {
  EXPECT_TRUE(factorize(1).factors.empty());
  auto f = factorize(12);
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].prime, 2u);
  EXPECT_EQ(f.factors[0].exponent, 2u);
  EXPECT_EQ(f.factors[1].prime, 3u);
  EXPECT_EQ(f.factors[1].exponent, 1u);
  auto g = factorize(1168);
  ASSERT_EQ(g.factors.size(), 2u);
  EXPECT_EQ(g.factors[0].prime, 2u);
  EXPECT_EQ(g.factors[0].exponent, 4u);
  EXPECT_EQ(g.factors[1].prime, 73u);
  EXPECT_THROW(factorize(0), precondition_error);
}

TEST(Factorize, ProductAndOrder) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    u64 n = 1 + rng() % 1'000'000'000'000ULL;
    auto f = factorize(n);
    u64 prod = 1, last = 1;
    for (auto [p, e] : f.factors) {
      EXPECT_GT(p, last);
      EXPECT_GE(e, 1u);
      EXPECT_TRUE(is_prime(p));
      for (unsigned j = 0; j < e; ++j) prod *= p;
      last = p;
    }
    EXPECT_EQ(prod, n);
  }
  EXPECT_TRUE(is_prime(999'999'999'989ULL));
  EXPECT_EQ(factorize(999'999'999'989ULL * 3).factors.size(), 2u);
}

TEST(TauK, Examples) {
  for (u64 k = 1; k <= 8; ++k) EXPECT_EQ(tau_k_at(1, k), 1u);
  for (u64 p : {2, 3, 101, 7919})
    for (u64 k = 1; k <= 8; ++k) EXPECT_EQ(tau_k_at(p, k), k);
  EXPECT_EQ(tau_k_at(4, 3), 6u);
}

TEST(TauK, MatchesTupleCount) {
  for (u64 n = 1; n <= 200; ++n)
    for (u64 k = 1; k <= 4; ++k) EXPECT_EQ(tau_k_at(n, k), count_tuples(n, k)) << n << " " << k;
}

TEST(TauK, Multiplicative) {
  std::mt19937_64 rng(2);
  int tested = 0;
  while (tested < 2000) {
    u64 m = 1 + rng() % 1'000'000, n = 1 + rng() % 1'000'000;
    if (std::gcd(m, n) != 1) continue;
    u64 k = 1 + rng() % 6;
    EXPECT_EQ(tau_k_at(m * n, k), tau_k_at(m, k) * tau_k_at(n, k));
    ++tested;
  }
}

TEST(TauK, ConvolutionIdentity) {
  for (u64 k = 2; k <= 6; ++k)
    for (u64 n = 1; n <= 10'000; ++n) {
      u128 s = 0;
      for (u64 d : divisors(n)) s += tau_k_at(d, k - 1);
      ASSERT_EQ(tau_k_at(n, k), s) << n << " " << k;
    }
}

TEST(TauK, OverflowReported) {
  EXPECT_THROW(tau_k_at(u64{1} << 62, 1'000'000'000), arith_overflow_error);
  EXPECT_EQ(binomial(10, 3), 120u);
  EXPECT_EQ(binomial(3, 10), 0u);
}

TEST(SmoothPart, Examples) {
  EXPECT_EQ(smooth_part(30, 2.5), 2u);
  EXPECT_EQ(smooth_part(30, 5), 30u);
  EXPECT_EQ(smooth_part(1, 17.0), 1u);
  EXPECT_THROW(smooth_part(12, 3), precondition_error);
}

TEST(SmoothPart, CofactorIsRough) {
  for (u64 d = 1; d <= 3000; ++d) {
    if (!is_squarefree(d)) continue;
    for (double z : {1.5, 2.0, 6.5, 30.0}) {
      u64 s = smooth_part(d, z);
      ASSERT_EQ(d % s, 0u);
      for (auto [p, e] : factorize(d / s).factors) EXPECT_GT(double(p), z);
      for (auto [p, e] : factorize(s).factors) EXPECT_LE(double(p), z);
    }
  }
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(1, 7), 1u);
  EXPECT_EQ(mod_inverse(3, 7), 5u);
  EXPECT_THROW(mod_inverse(2, 4), no_inverse_error);
  EXPECT_EQ(mod_inverse(-3, 7), 2u);
  for (u64 m = 2; m <= 60; ++m)
    for (i64 a = -70; a <= 70; ++a)
      if (gcd_signed(a, m) == 1) { EXPECT_EQ(mulmod(mod_floor(a, m), mod_inverse(a, m), m), 1u); }
}

TEST(Params, ThetaAndRho) {
  auto p = make_params(1'000'000, 4);
  EXPECT_EQ(p.theta_k, kDefaultVarpi * kDefaultVarpi);
  EXPECT_FALSE(p.scaled());
  auto q = make_params(1'000'000, 4, Exponent(499, 1000));
  EXPECT_EQ(q.theta_k, Exponent(1, 72));
  auto r = make_params(1'000'000, 3, Exponent(1, 10));
  EXPECT_NEAR(r.rho, std::pow(10.0, -0.6), 1e-12);
  EXPECT_LT(r.exp_D2, r.exp_D3);
  EXPECT_GT(r.rho, 0.0);
  EXPECT_LT(r.rho, 1.0);
  EXPECT_THROW(make_params(1, 3), precondition_error);
  EXPECT_THROW(make_params(10, 3, Exponent(1, 2)), precondition_error);
}

TEST(ExponentCompare, StrictBoundaries) {
  // 100 = (10^4)^{1/2} exactly: neither below nor above
  EXPECT_FALSE(below_power(100, 10'000, Exponent(1, 2)));
  EXPECT_FALSE(above_power(100, 10'000, Exponent(1, 2)));
  EXPECT_TRUE(at_most_power(100, 10'000, Exponent(1, 2)));
  EXPECT_TRUE(below_power(99, 10'000, Exponent(1, 2)));
  EXPECT_TRUE(above_power(101, 10'000, Exponent(1, 2)));
  // 4^{293/584} is just above 2
  EXPECT_TRUE(below_power(2, 4, kModulusCeiling));
  EXPECT_FALSE(below_power(3, 4, kModulusCeiling));
  EXPECT_EQ(compare_power(u64{1} << 40, u64{1} << 60, Exponent(2, 3)), Cmp::equal);
}

TEST(ExponentArithmetic, Rational) {
  Exponent a(1, 8), b(4);
  EXPECT_EQ(a * b, Exponent(1, 2));
  EXPECT_EQ(Exponent(1, 2) - Exponent(1, 12 * 5), Exponent(29, 60));
  EXPECT_EQ((Exponent(3, 8) + Exponent(8) * kDefaultVarpi).str(), "223/584");
  EXPECT_LT(Exponent(1, 3), Exponent(1, 2));
}
