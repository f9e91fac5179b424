#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "dival/characters.hpp"

using namespace dival;

namespace {

bool near(std::complex<double> a, std::complex<double> b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

// smallest q | d with chi(n) = 1 for every unit n = 1 (mod q)
u64 brute_conductor(const Character& chi) {
  const u64 d = chi.modulus();
  for (u64 q : divisors(d)) {
    bool trivial = true;
    for (u64 n = 1; n < d + 1 && trivial; n += q)
      if (std::gcd(n, d) == 1 && !near(chi(i64(n)), 1.0)) trivial = false;
    if (trivial) return q;
  }
  return d;
}

}  // namespace

TEST(Characters, Examples) {
  auto c1 = enumerate_characters(1);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_TRUE(c1[0].is_principal());
  for (i64 n : {-3, 0, 1, 7}) EXPECT_TRUE(near(c1[0](n), 1.0));
  EXPECT_EQ(enumerate_characters(3).size(), 2u);

  auto c8 = enumerate_characters(8);
  ASSERT_EQ(c8.size(), 4u);
  EXPECT_TRUE(c8[0].is_principal());
  std::map<u64, int> by_conductor;
  for (const auto& chi : c8) ++by_conductor[chi.conductor()];
  EXPECT_EQ(by_conductor[8], 2);
  EXPECT_EQ(by_conductor[4], 1);
  EXPECT_EQ(by_conductor[1], 1);

  EXPECT_TRUE(near(principal_character(6)(5), 1.0));
  EXPECT_TRUE(near(enumerate_characters(4)[1](3), -1.0));
  EXPECT_THROW(enumerate_characters(0), precondition_error);
}

TEST(Characters, GroupStructure) {
  for (u64 d = 1; d <= 200; ++d) {
    auto chars = enumerate_characters(d);
    ASSERT_EQ(chars.size(), euler_phi(d)) << d;
    EXPECT_TRUE(chars[0].is_principal());
    std::set<std::vector<std::pair<long long, long long>>> seen;
    for (const auto& chi : chars) {
      std::vector<std::pair<long long, long long>> vals;
      for (u64 n = 0; n < d; ++n) {
        auto v = chi.value(i64(n));
        EXPECT_EQ(v.zero, std::gcd(n, d) != 1) << d << " " << n;
        if (!v.zero) { EXPECT_NEAR(std::abs(v.value), 1.0, 1e-12); }
        vals.emplace_back(v.zero ? -1 : (long long)v.num, (long long)v.den);
      }
      seen.insert(vals);
      EXPECT_EQ(chi.conductor(), brute_conductor(chi)) << d;
      EXPECT_EQ(d % chi.conductor(), 0u);
    }
    EXPECT_EQ(seen.size(), chars.size()) << "characters mod " << d << " not distinct";
  }
}

TEST(Characters, Multiplicative) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10'000; ++i) {
    u64 d = 1 + rng() % 500;
    auto chars = enumerate_characters(d);
    const auto& chi = chars[rng() % chars.size()];
    i64 m = i64(rng() % 100'000) - 50'000, n = i64(rng() % 100'000) - 50'000;
    ASSERT_TRUE(near(chi(m * n), chi(m) * chi(n))) << d << " " << m << " " << n;
  }
}

TEST(Characters, PrimitiveInduction) {
  auto c6 = enumerate_characters(6);
  auto pr = conductor_and_primitive(c6[0]);
  EXPECT_EQ(pr.conductor, 1u);
  EXPECT_EQ(pr.primitive.modulus(), 1u);
  EXPECT_EQ(conductor_and_primitive(c6[1]).conductor, 3u);
  for (const auto& chi : enumerate_characters(5))
    if (!chi.is_principal()) { EXPECT_EQ(conductor_and_primitive(chi).conductor, 5u); }

  for (u64 d = 1; d <= 150; ++d)
    for (const auto& chi : enumerate_characters(d)) {
      auto [q, star] = conductor_and_primitive(chi);
      ASSERT_EQ(d % q, 0u);
      EXPECT_EQ(star.modulus(), q);
      EXPECT_TRUE(star.is_primitive());
      for (u64 n = 1; n <= 2 * d; ++n)
        if (std::gcd(n, d) == 1) { ASSERT_TRUE(near(chi(i64(n)), star(i64(n)))) << d << " " << n; }
    }
}

TEST(CharSum, Examples) {
  auto tau = sieve_table(TableKind::tau(2), 1, 100);
  EXPECT_TRUE(near(char_sum(tau, principal_character(1)), double(full_sum(tau).integer)));
  auto unit = sieve_table(TableKind::unit(), 1, 99);
  EXPECT_TRUE(near(char_sum(unit, enumerate_characters(3)[1]), 0.0));

  auto t4 = sieve_table(TableKind::tau(4), 1, 10'000);
  for (const auto& chi : enumerate_characters(5)) {
    auto s = char_sum(t4, chi);
    // report-only size of the sum against the table total
    std::printf("tau_4, d=5, X=10^4: |sum| = %.3f, |sum| / sum tau_4 = %.3e\n", std::abs(s),
                std::abs(s) / double(full_sum(t4).integer));
  }
}

TEST(CharSum, MatchesDirectLoop) {
  auto t = sieve_table(TableKind::tau(3), 1, 3000);
  for (u64 d : {7u, 12u, 30u, 64u})
    for (const auto& chi : enumerate_characters(d))
      for (u64 r : {1u, 6u, 35u}) {
        std::complex<double> direct{};
        for (u64 n = 1; n <= 3000; ++n)
          if (std::gcd(n, r) == 1) direct += double(t.exact_at(n)) * chi(i64(n));
        ASSERT_TRUE(near(char_sum(t, chi, r), direct, 1e-7));
      }
}

TEST(CharSum, InductionConsistency) {
  auto t = sieve_table(TableKind::tau(3), 1, 5000);
  for (u64 d = 1; d <= 50; ++d)
    for (const auto& chi : enumerate_characters(d)) {
      if (chi.is_principal()) continue;
      auto [q, star] = conductor_and_primitive(chi);
      ASSERT_TRUE(near(char_sum(t, chi, 1), char_sum(t, star, d), 1e-9)) << d;
    }
}

TEST(LargeSieve, Examples) {
  std::vector<std::complex<double>> one{1.0};
  for (u64 Q : {1u, 5u, 50u}) EXPECT_LE(large_sieve_check(one, Q), 1.0);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    u64 N = 1 + rng() % 200, Q = 1 + rng() % 60;
    std::vector<std::complex<double>> a(N);
    for (auto& z : a) z = (rng() & 1) ? 1.0 : -1.0;
    EXPECT_LE(large_sieve_check(a, Q), 1.0);
  }
  std::vector<std::complex<double>> spike(10, 0.0);
  spike[0] = 1.0;
  EXPECT_GT(large_sieve_check(spike, 3), 0.0);
}
