#include <gtest/gtest.h>

#include <clocale>

#include "dival/report.hpp"

using namespace dival;

TEST(Format, Doubles) {
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-3.0), "-3.0");
  EXPECT_EQ(format_double(1e300), "1e+300");
  EXPECT_EQ(format_double(0.1), "0.1");
  // a comma-decimal locale does not leak into the output
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    EXPECT_EQ(format_double(2.5), "2.5");
    std::setlocale(LC_NUMERIC, "C");
  }
}

TEST(Csv, DeltaToyRow) {
  auto tau = sieve_table(TableKind::tau(2), 1, 10);
  EXPECT_EQ(csv_row(delta(tau, 3, 1)), "3,1,1,1,1.0");
  EXPECT_EQ(csv_row(delta(tau, 3, 2)), "3,2,-1,1,1.0");
  auto t = sieve_table(TableKind::tau(2), 1, 11);
  // a row with a non-trivial denominator
  auto rec = delta(t, 4, 1);
  EXPECT_EQ(csv_row(rec), "4,1," + rec.delta.get_num().get_str() + "," +
                              rec.delta.get_den().get_str() + "," +
                              format_double(std::abs(rec.delta.get_d())));
}

TEST(Csv, BilinearRows) {
  auto unit = sieve_table(TableKind::unit(), 1, 4);
  EXPECT_EQ(csv_row(bilinear_E(unit, unit, 2, 1, BilinearVariant::unrestricted)),
            "2,1,4,1,unrestricted");
  auto lam = sieve_table(TableKind::von_mangoldt(), 1, 4);
  auto r = bilinear_E(unit, lam, 1, 0, BilinearVariant::coprime_restricted);
  EXPECT_EQ(csv_row(r), "1,0," + format_double(r.real) + ",1,coprime_restricted");
}

TEST(Csv, ExpSumRow) {
  auto r = kloosterman(0, 0, 5);
  EXPECT_EQ(csv_row("kloosterman", "a=0;b=0;q=5", r),
            "kloosterman,a=0;b=0;q=5,4.0," + format_double(r.bound) + "," + format_double(r.ratio));
}

TEST(Json, ReportsEmbedParams) {
  auto p = make_params(10'000, 4, Exponent(1, 8));
  auto fam = build_family(p, 1);
  auto j = report_json(theorem1_experiment(p, 1, fam));
  EXPECT_EQ(j["params"]["varpi"], "1/8");
  EXPECT_EQ(j["params"]["theta_k"], "1/72");
  EXPECT_TRUE(j["scaled"].get<bool>());
  EXPECT_EQ(j["family_size"], 5);
  for (const char* key : {"lhs", "rhs", "ratio"}) EXPECT_TRUE(j[key].is_number()) << key;

  auto empty = report_json(theorem1_experiment(make_params(1'000'000, 4), 1,
                                               build_family(make_params(1'000'000, 4), 1)));
  EXPECT_FALSE(empty["scaled"].get<bool>());
  EXPECT_TRUE(empty["empty"].get<bool>());

  auto v = report_json(conjecture_report(sieve_table(TableKind::tau(2), 1, 10), 3, {10'000, 0, 1000, 1}));
  for (const char* key : {"k", "X", "d_or_D", "c", "empirical_num", "empirical_den", "conjectured",
                          "ratio", "samples", "seed", "params", "scaled"})
    EXPECT_TRUE(v.contains(key)) << key;
  EXPECT_EQ(v["empirical_num"], "2");
  EXPECT_EQ(v["empirical_den"], "1");

  auto b = report_json(theorem14_experiment(2, 50, 5, SecondFactor::tau_k));
  EXPECT_EQ(b["variant"], "unrestricted");
  EXPECT_EQ(b["second"], "tau_k");
  EXPECT_EQ(dump(b).back(), '\n');
  EXPECT_EQ(dump(b).find('\r'), std::string::npos);
}
