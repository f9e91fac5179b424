#pragma once

// CSV rows and JSON reports. Numbers are printed with std::to_chars, so the
// output never depends on the locale, and rows end in a bare LF.

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dival/bilinear.hpp"
#include "dival/discrepancy.hpp"
#include "dival/expsums.hpp"
#include "dival/variance.hpp"

namespace dival {

using json = nlohmann::ordered_json;

/// Shortest round-trip form; integral values keep a trailing ".0".
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

inline std::string rational_string(const mpq_class& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

/// JSON cannot carry inf or nan; they become null.
inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const ParamSet& p) {
  return json{
      {"X", p.X},
      {"k", p.k},
      {"varpi", p.varpi.str()},
      {"theta_k", p.theta_k.str()},
      {"exp_D0", p.exp_D0},
      {"exp_D1", p.exp_D1.str()},
      {"exp_D2", p.exp_D2.str()},
      {"exp_D3", p.exp_D3.str()},
      {"exp_Q0", p.exp_Q0.str()},
      {"rho", p.rho},
      {"exp_X1", p.exp_X1.str()},
      {"exp_X2", p.exp_X2.str()},
  };
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kDeltaCsvHeader = "d,a,delta_num,delta_den,abs_delta_float";
inline constexpr const char* kBilinearCsvHeader = "d,a,e_num,e_den,variant";
inline constexpr const char* kExpSumCsvHeader = "sum_kind,params,abs_value,bound,ratio";

inline std::string csv_row(const DiscrepancyRecord& r) {
  mpq_class abs_delta = abs(r.delta);
  return std::to_string(r.d) + "," + std::to_string(r.a) + "," + r.delta.get_num().get_str() +
         "," + r.delta.get_den().get_str() + "," + format_double(abs_delta.get_d());
}

/// Exact records print numerator and denominator; real-valued ones (von
/// Mangoldt) print the value over 1.
inline std::string csv_row(const BilinearRecord& r) {
  std::string head = std::to_string(r.d) + "," + std::to_string(r.a) + ",";
  if (r.exact)
    head += r.e_value.get_num().get_str() + "," + r.e_value.get_den().get_str();
  else
    head += format_double(r.real) + ",1";
  return head + "," + to_string(r.variant);
}

/// `params` is a ';'-joined list of key=value pairs, so every kind of sum
/// fits one fixed set of columns.
inline std::string csv_row(const std::string& kind, const std::string& params,
                           const ExpSumResult& r) {
  return kind + "," + params + "," + format_double(r.abs_value) + "," + format_double(r.bound) +
         "," + format_double(r.ratio);
}

// ---------------------------------------------------------------------------
// JSON reports: {params, lhs, rhs, ratio, scaled} plus experiment specifics.

inline json report_json(const Theorem1Report& r) {
  json j;
  j["experiment"] = "theorem1";
  j["params"] = to_json(r.params);
  j["scaled"] = r.params.scaled();
  j["a"] = r.a;
  j["family_size"] = r.family_size;
  j["empty"] = r.family_size == 0;
  j["lhs"] = finite_or_null(r.lhs.get_d());
  j["lhs_exact"] = rational_string(r.lhs);
  j["rhs"] = finite_or_null(r.rhs);
  j["ratio"] = finite_or_null(r.ratio);
  return j;
}

inline json report_json(const Theorem13Report& r) {
  auto p = make_params(r.X, r.k);
  json j;
  j["experiment"] = "theorem13";
  j["params"] = to_json(p);
  j["scaled"] = p.scaled();
  j["k"] = r.k;
  j["X"] = r.X;
  j["d_or_D"] = r.D;
  j["empirical_num"] = r.lhs.get_num().get_str();
  j["empirical_den"] = r.lhs.get_den().get_str();
  j["lhs"] = finite_or_null(r.lhs.get_d());
  j["rhs"] = finite_or_null(r.rhs);
  j["ratio"] = finite_or_null(r.ratio);
  return j;
}

inline json report_json(const VarianceReport& r) {
  auto p = make_params(r.X, r.k);
  json j;
  j["experiment"] = "conjecture";
  j["params"] = to_json(p);
  j["scaled"] = p.scaled();
  j["k"] = r.k;
  j["X"] = r.X;
  j["d_or_D"] = r.d;
  j["c"] = finite_or_null(r.c);
  j["c_in_range"] = r.c_in_range;
  j["empirical_num"] = r.empirical.get_num().get_str();
  j["empirical_den"] = r.empirical.get_den().get_str();
  j["conjectured"] = finite_or_null(r.conjectured);
  j["ratio"] = finite_or_null(r.ratio);
  j["a_k"] = finite_or_null(r.a_k);
  j["gamma_k"] = finite_or_null(r.gamma);
  j["gamma_k_std_error"] = finite_or_null(r.gamma_std_error);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["lhs"] = finite_or_null(r.empirical.get_d());
  j["rhs"] = finite_or_null(r.conjectured);
  return j;
}

inline json report_json(const Theorem14Report& r) {
  auto p = make_params(r.X, r.k);
  json j;
  j["experiment"] = "theorem14";
  j["params"] = to_json(p);
  j["scaled"] = p.scaled();
  j["k"] = r.k;
  j["X"] = r.X;
  j["d_or_D"] = r.D;
  j["second"] = r.second == SecondFactor::tau_k ? "tau_k" : "von_mangoldt";
  j["variant"] = to_string(r.variant);
  j["exact"] = r.exact;
  j["lhs"] = finite_or_null(r.lhs_real);
  if (r.exact) j["lhs_exact"] = rational_string(r.lhs);
  j["rhs"] = finite_or_null(r.rhs);
  j["ratio"] = finite_or_null(r.ratio);
  return j;
}

/// Two-space indented JSON with a trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dival
