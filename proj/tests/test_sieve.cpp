#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dival/sieve.hpp"

using namespace dival;

namespace {

i64 divisor_count(u64 n) {
  i64 c = 0;
  for (u64 d = 1; d * d <= n; ++d)
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  return c;
}

// Lambda(n) by repeated division, not through factorize()
double mangoldt(u64 n) {
  for (u64 p = 2; p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      return n == 1 ? std::log(double(p)) : 0.0;
    }
  return 0.0;
}

}  // namespace

TEST(Sieve, Examples) {
  auto t = sieve_table(TableKind::tau(2), 1, 10);
  EXPECT_EQ(full_sum(t).integer, 27);
  auto m = sieve_table(TableKind::moebius(), 1, 6);
  std::vector<i64> expect{1, -1, -1, 0, -1, 1};
  EXPECT_EQ(std::vector<i64>(m.ints().begin(), m.ints().end()), expect);
  auto u = sieve_table(TableKind::unit(), 5, 9);
  EXPECT_EQ(u.size(), 5u);
  for (u64 n = 5; n <= 9; ++n) EXPECT_EQ(u.exact_at(n), 1);
}

TEST(Sieve, AgainstPointwiseOracles) {
  const u64 lo = 999'000, hi = 1'001'000;
  auto t2 = sieve_table(TableKind::tau(2), lo, hi);
  auto phi = sieve_table(TableKind::euler_phi(), lo, hi);
  auto mu = sieve_table(TableKind::moebius(), lo, hi);
  auto lam = sieve_table(TableKind::von_mangoldt(), 1, 3000);
  for (u64 n = lo; n <= hi; ++n) {
    ASSERT_EQ(t2.exact_at(n), divisor_count(n)) << n;
    i64 cop = 0;
    if (n % 97 == 0)  // spot-check phi by direct count
      for (u64 m = 1; m <= n; ++m) cop += std::gcd(m, n) == 1;
    if (n % 97 == 0) { EXPECT_EQ(phi.exact_at(n), cop); }
    EXPECT_TRUE(mu.exact_at(n) >= -1 && mu.exact_at(n) <= 1);
  }
  for (u64 n = 1; n <= 3000; ++n) ASSERT_DOUBLE_EQ(lam.at(n), mangoldt(n)) << n;
}

TEST(Sieve, TauKSpotChecks) {
  std::mt19937_64 rng(5);
  for (unsigned k = 1; k <= 6; ++k) {
    auto t = sieve_table(TableKind::tau(k), 1, 200'000);
    for (int i = 0; i < 1000; ++i) {
      u64 n = 1 + rng() % 200'000;
      ASSERT_EQ(u128(t.exact_at(n)), tau_k_at(n, k)) << n;
    }
  }
}

TEST(Sieve, BlockConsistency) {
  for (auto kind : {TableKind::tau(3), TableKind::moebius(), TableKind::von_mangoldt(),
                    TableKind::euler_phi()}) {
    auto whole = sieve_table(kind, 1, 100'000);
    std::vector<ArithmeticTable> parts;
    sieve_blocks(kind, 1, 100'000, 10'000, [&](const ArithmeticTable& b) { parts.push_back(b); });
    EXPECT_EQ(parts.size(), 10u);
    EXPECT_EQ(concat(parts), whole);
  }
}

TEST(Sieve, BudgetAndRange) {
  EXPECT_THROW(sieve_table(TableKind::unit(), 1, 1'000'000, {1000}), budget_error);
  EXPECT_THROW(sieve_table(TableKind::unit(), 0, 10), precondition_error);
  EXPECT_THROW(sieve_table(TableKind::unit(), 1, 2'000'000'000), precondition_error);
}

TEST(Sums, Examples) {
  auto t = sieve_table(TableKind::tau(2), 1, 10);
  EXPECT_EQ(ap_sum(t, 3, 1).integer, 10);
  EXPECT_EQ(ap_sum(t, 1, 0).integer, 27);
  EXPECT_EQ(coprime_sum(t, 3).integer, 18);
  EXPECT_EQ(coprime_sum(t, 1).integer, 27);
  auto u = sieve_table(TableKind::unit(), 1, 10);
  EXPECT_EQ(ap_sum(u, 2, 0).integer, 5);
  EXPECT_EQ(coprime_sum(u, 6).integer, 3);
}

TEST(Sums, PartitionIdentities) {
  auto t = sieve_table(TableKind::tau(4), 1, 20'000);
  const i128 total = full_sum(t).integer;
  for (u64 d = 1; d <= 50; ++d) {
    i128 all = 0, reduced = 0;
    for (u64 a = 0; a < d; ++a) {
      i128 s = ap_sum(t, d, a).integer;
      all += s;
      if (std::gcd(a, d) == 1) reduced += s;
    }
    EXPECT_TRUE(all == total);
    EXPECT_TRUE(reduced == coprime_sum(t, d).integer);
  }
}

TEST(Sums, Hyperbola) {
  for (u64 X : {1'000ULL, 100'000ULL}) {
    auto t = sieve_table(TableKind::tau(2), 1, X);
    const u64 r = isqrt(X);
    i128 expect = 0;
    for (u64 m = 1; m <= r; ++m) expect += 2 * i128(X / m);
    expect -= i128(r) * r;
    EXPECT_TRUE(full_sum(t).integer == expect) << X;
  }
}

TEST(Shiu, Diagnostics) {
  // d = 1: the ratio is sum tau over [N, N'] / ((N'-N) log N'), by direct sum
  double direct = 0;
  for (u64 n = 100; n <= 200; ++n) direct += double(divisor_count(n));
  EXPECT_NEAR(shiu_ratio(2, 1, 100, 200, 1, 0), direct / (100.0 * std::log(200.0)), 1e-12);
  double r = shiu_ratio(2, 1, 100, 1000, 3, 1);
  EXPECT_GT(r, 0.0);
  EXPECT_TRUE(std::isfinite(r));
  std::vector<double> rs;
  for (u64 N : {1'000ULL, 10'000ULL, 100'000ULL}) rs.push_back(shiu_ratio(2, 1, N, 2 * N, 7, 3));
  for (double a : rs)
    for (double b : rs) EXPECT_LT(a / b, 3.0);
}

TEST(Dvl1, RoundTrip) {
  for (auto kind : {TableKind::tau(5), TableKind::von_mangoldt(), TableKind::moebius()}) {
    auto t = sieve_table(kind, 17, 5000);
    std::stringstream ss;
    dump_table(ss, t);
    std::string bytes = ss.str();
    EXPECT_EQ(bytes.substr(0, 4), "DVL1");
    EXPECT_EQ(bytes.size(), 4 + 1 + 1 + 8 + 8 + 8 * t.size());
    EXPECT_EQ(std::uint8_t(bytes[4]), std::uint8_t(kind.fn));
    std::stringstream in(bytes);
    EXPECT_EQ(load_table(in), t);
  }
  std::stringstream bad("DVL2xxxxxxxxxxxxxxxxxxxxxx");
  EXPECT_THROW(load_table(bad), format_error);
}
