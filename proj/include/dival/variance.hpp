#pragma once

// Variance of tau_k over reduced residue classes: the exact empirical side
// and the conjectured main term a_k(d) gamma_k(c) X (log d)^{k^2-1}.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dival/arith.hpp"
#include "dival/discrepancy.hpp"
#include "dival/numeric.hpp"
#include "dival/parallel.hpp"
#include "dival/sieve.hpp"

namespace dival {

/// Barnes G at positive integers: G(1) = G(2) = 1, G(m) = prod_{j=1}^{m-2} j!.
inline u128 barnes_g(u64 m) {
  require(m >= 1 && m <= 30, "barnes_g: need 1 <= m <= 30");
  u128 g = 1, fact = 1;
  for (u64 j = 1; j + 2 <= m; ++j) {
    fact = checked_mul(fact, j);
    g = checked_mul(g, fact);
  }
  return g;
}

// ---------------------------------------------------------------------------
// a_k(d) as a truncated Euler product.

struct ArithmeticConstant {
  double value = 0;
  double doubling_delta = 0;  // value at 2*cutoff minus value at cutoff
  u64 cutoff = 0;
};

namespace detail {

// log of (1-1/p)^{k^2} sum_{j>=0} tau_k(p^j)^2 p^{-j}, with the series
// summed until a term drops below 1e-16 of the partial sum (j <= 400).
inline double log_local_factor(u64 k, double p) {
  double tail = 0;  // sum over j >= 1
  double binom = 1; // C(j+k-1, k-1)
  double pj = 1;
  for (u64 j = 1; j <= 400; ++j) {
    binom = binom * double(j + k - 1) / double(j);
    pj /= p;
    double term = binom * binom * pj;
    tail += term;
    if (term < 1e-16 * (1.0 + tail)) break;
  }
  return double(k * k) * std::log1p(-1.0 / p) + std::log1p(tail);
}

inline double a_k_log_product(u64 k, const Factorization& d, std::span<const u64> primes) {
  CompensatedSum acc;
  std::size_t next = 0;
  auto dp = d.primes();
  for (u64 p : primes) {
    while (next < dp.size() && dp[next] < p) ++next;
    if (next < dp.size() && dp[next] == p) continue;
    acc += log_local_factor(k, double(p));
  }
  for (u64 p : dp) acc += double(k * k) * std::log1p(-1.0 / double(p));
  return acc.value();
}

}  // namespace detail

inline ArithmeticConstant a_k_const(u64 k, u64 d, u64 prime_cutoff = 100'000) {
  require(k >= 1 && k <= 8, "a_k_const: need 1 <= k <= 8");
  require(d >= 1, "a_k_const: d must be >= 1");
  require(prime_cutoff >= 2 && prime_cutoff <= 1'000'000, "a_k_const: cutoff must be in [2, 10^6]");
  const auto f = factorize(d);
  const auto primes = primes_up_to(2 * prime_cutoff);
  auto split = std::upper_bound(primes.begin(), primes.end(), prime_cutoff);
  std::span<const u64> head(primes.data(), std::size_t(split - primes.begin()));
  ArithmeticConstant out;
  out.cutoff = prime_cutoff;
  out.value = std::exp(detail::a_k_log_product(k, f, head));
  out.doubling_delta = std::exp(detail::a_k_log_product(k, f, primes)) - out.value;
  return out;
}

// ---------------------------------------------------------------------------
// gamma_k(c) by Monte Carlo on the slice w_1 + ... + w_k = c of [0,1]^k.

struct GammaEstimate {
  u64 k = 0;
  double c = 0;
  u64 samples = 0;
  u64 seed = 0;
  double value = 0;
  double std_error = 0;
};

inline constexpr u64 kGammaBlock = u64{1} << 16;

inline double vandermonde_squared(std::span<const double> w) {
  double v = 1;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) v *= (w[i] - w[j]) * (w[i] - w[j]);
  return v;
}

namespace detail {
inline u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// w_1..w_{k-1} uniform on [0,1], w_k = c - sum; a sample contributes
/// Delta(w)^2 when w_k lands in [0,1]. Samples are drawn in fixed blocks of
/// 2^16, each from its own generator seeded by (seed, block index), and the
/// block sums are merged in block order: the estimate is identical for any
/// thread count.
inline GammaEstimate gamma_k(u64 k, double c, u64 samples, u64 seed = 0, unsigned threads = 1) {
  require(k >= 2 && k <= 6, "gamma_k: need 2 <= k <= 6");
  require(samples >= 10'000, "gamma_k: need at least 10^4 samples");
  GammaEstimate est{k, c, samples, seed, 0.0, 0.0};
  if (!(c > 0) || c >= double(k)) return est;

  struct Partial {
    double sum = 0, sum_sq = 0;
  };
  const u64 blocks = (samples + kGammaBlock - 1) / kGammaBlock;
  auto parts = parallel_map(
      blocks,
      [&](std::size_t b) {
        std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(b + 1)));
        const u64 begin = b * kGammaBlock;
        const u64 end = std::min(samples, begin + kGammaBlock);
        std::vector<double> w(k);
        CompensatedSum s, s2;
        for (u64 i = begin; i < end; ++i) {
          double rest = c;
          for (u64 j = 0; j + 1 < k; ++j) {
            w[j] = double(rng() >> 11) * 0x1.0p-53;
            rest -= w[j];
          }
          if (rest < 0.0 || rest > 1.0) continue;
          w[k - 1] = rest;
          double v = vandermonde_squared(w);
          s += v;
          s2 += v * v;
        }
        return Partial{s.value(), s2.value()};
      },
      threads);
  CompensatedSum sum, sum_sq;
  for (const auto& p : parts) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = double(samples);
  const double mean = sum.value() / n;
  const double var = std::max(0.0, sum_sq.value() / n - mean * mean) * n / (n - 1.0);
  double g = double(barnes_g(k + 1));
  double kfact = 1;
  for (u64 j = 2; j <= k; ++j) kfact *= double(j);
  const double norm = kfact * g * g;
  est.value = mean / norm;
  est.std_error = std::sqrt(var / n) / norm;
  return est;
}

// ---------------------------------------------------------------------------
// Exact variance sums.

/// sum over reduced a of Delta(f; X, d, a)^2, exact.
inline mpq_class empirical_variance(const ArithmeticTable& t, u64 d) {
  require(d >= 1 && d <= 100'000, "empirical_variance: need 1 <= d <= 10^5");
  detail::require_full_range(t, "empirical_variance");
  auto rs = residue_sums(t, d);
  const u64 phi = euler_phi(d);
  i128 coprime = 0;
  for (u64 r = 0; r < d; ++r)
    if (std::gcd(r, d) == 1) coprime += rs.integer[r];
  // Delta(a) = (phi A_a - S) / phi
  const mpz_class S = to_mpz(coprime), P(phi);
  mpz_class num = 0, diff;
  for (u64 r = 0; r < d; ++r) {
    if (std::gcd(r, d) != 1) continue;
    diff = P * to_mpz(rs.integer[r]) - S;
    num += diff * diff;
  }
  mpq_class out(num, P * P);
  out.canonicalize();
  return out;
}

struct Theorem13Report {
  u64 k = 0, X = 0, D = 0;
  mpq_class lhs;
  double rhs = 0;  // (D + X^{1 - 1/(6(k+2))}) X (log X)^{k^2 - 1}
  double ratio = 0;
};

inline Theorem13Report theorem13_experiment(const ArithmeticTable& tau, u64 D, unsigned threads = 1) {
  require(tau.kind().fn == FunctionKind::tau_k && tau.lo() == 1,
          "theorem13_experiment: need a tau_k table on [1, X]");
  require(D >= 1, "theorem13_experiment: D must be >= 1");
  const u64 k = tau.kind().k, X = tau.hi();
  auto parts = parallel_map(
      D, [&](std::size_t i) { return empirical_variance(tau, u64(i) + 1); }, threads);
  Theorem13Report rep{k, X, D, 0, 0, 0};
  for (const auto& v : parts) rep.lhs += v;
  const double x = double(X), logx = std::log(x);
  rep.rhs = (double(D) + std::pow(x, 1.0 - 1.0 / (6.0 * double(k + 2)))) * x *
            std::pow(logx, double(k * k) - 1.0);
  rep.ratio = rep.lhs.get_d() / rep.rhs;
  return rep;
}

inline Theorem13Report theorem13_experiment(u64 k, u64 X, u64 D, unsigned threads = 1) {
  return theorem13_experiment(sieve_table(TableKind::tau(unsigned(k)), 1, X), D, threads);
}

struct VarianceReport {
  u64 k = 0, X = 0, d = 0;
  double c = 0;        // log X / log d (0 when d = 1)
  bool c_in_range = false;
  mpq_class empirical;
  double conjectured = 0;
  double ratio = 0;
  double a_k = 0;
  double gamma = 0;
  double gamma_std_error = 0;
  u64 samples = 0, seed = 0;
};

struct ConjectureOptions {
  u64 samples = 1'000'000;
  u64 seed = 0;
  u64 prime_cutoff = 100'000;
  unsigned threads = 1;
};

inline VarianceReport conjecture_report(const ArithmeticTable& tau, u64 d,
                                        const ConjectureOptions& opt = {}) {
  require(tau.kind().fn == FunctionKind::tau_k && tau.lo() == 1,
          "conjecture_report: need a tau_k table on [1, X]");
  const u64 k = tau.kind().k, X = tau.hi();
  VarianceReport rep;
  rep.k = k;
  rep.X = X;
  rep.d = d;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  rep.empirical = empirical_variance(tau, d);
  if (d >= 2) {
    rep.c = std::log(double(X)) / std::log(double(d));
    rep.c_in_range = rep.c > 0 && rep.c < double(k);
  }
  if (!rep.c_in_range || k < 2 || k > 6) return rep;
  auto ak = a_k_const(k, d, opt.prime_cutoff);
  auto g = gamma_k(k, rep.c, opt.samples, opt.seed, opt.threads);
  rep.a_k = ak.value;
  rep.gamma = g.value;
  rep.gamma_std_error = g.std_error;
  rep.conjectured = ak.value * g.value * double(X) *
                    std::pow(std::log(double(d)), double(k * k) - 1.0);
  rep.ratio = rep.conjectured > 0 ? rep.empirical.get_d() / rep.conjectured : 0.0;
  return rep;
}

}  // namespace dival
