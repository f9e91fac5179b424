// dival: command-line driver for the sieves, discrepancy and variance
// experiments. Every run writes its artifacts plus manifest.json under
// --output_path; a failed run removes what it wrote.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dival/acceptance.hpp"
#include "dival/report.hpp"

namespace fs = std::filesystem;
using namespace dival;

namespace {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config file: `key = value` lines, '#' or ';' comments, optional [section]
// headers ignored. Keys become `--key value` arguments appended after the
// command line, skipping any key the command line already sets.

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("--config: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    out.emplace_back(key, value);
  }
  return out;
}

std::string canonical_key(std::string key) { return key == "thread_count" ? "threads" : key; }

std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    std::string key = a.substr(2, a.find('=') - 2);
    given.insert(canonical_key(key));
    if (key == "config") {
      if (a.find('=') != std::string::npos) path = a.substr(a.find('=') + 1);
      else if (i + 1 < args.size()) path = args[i + 1];
    }
  }
  if (!path) return args;
  for (auto& [k, v] : read_config(*path)) {
    if (k == "config" || given.count(canonical_key(k))) continue;
    args.push_back("--" + k);
    args.push_back(v);
  }
  return args;
}

std::string fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Exponent parse_exponent(const std::string& s, const std::string& field) {
  auto fail = [&] { throw config_error("--" + field + ": expected a rational p/q, got '" + s + "'"); };
  try {
    std::size_t slash = s.find('/');
    std::size_t used = 0;
    i64 num = std::stoll(s.substr(0, slash), &used);
    if (used != s.substr(0, slash).size()) fail();
    i64 den = 1;
    if (slash != std::string::npos) {
      std::string tail = s.substr(slash + 1);
      den = std::stoll(tail, &used);
      if (used != tail.size() || den <= 0) fail();
    }
    return Exponent(num, den);
  } catch (const std::logic_error&) {
    fail();
  }
  return {};
}

// ---------------------------------------------------------------------------
// Output directory bookkeeping.

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& bytes) {
    fs::create_directories(dir_);
    written_.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  }

  std::ofstream open(const std::string& name) {
    fs::create_directories(dir_);
    written_.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    return out;
  }

  void finish(const std::string& command, const json& config, const json& runtime) {
    json m;
    m["command"] = command;
    m["config_hash"] = "fnv1a64:" + fnv1a64(config.dump());
    m["config"] = config;
    m["runtime"] = runtime;
    m["files"] = written_;
    write("manifest.json", dump(m));
  }

  void discard() noexcept {
    std::error_code ec;
    for (const auto& f : written_) fs::remove(dir_ / f, ec);
    written_.clear();
  }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

TableKind parse_kind(const std::string& name, unsigned k) {
  if (name == "tau") return TableKind::tau(k);
  if (name == "von_mangoldt") return TableKind::von_mangoldt();
  if (name == "moebius") return TableKind::moebius();
  if (name == "euler_phi") return TableKind::euler_phi();
  return TableKind::unit();
}

const std::vector<std::string> kKinds{"tau", "von_mangoldt", "moebius", "euler_phi", "unit"};

// ---------------------------------------------------------------------------

struct Global {
  std::string config;
  std::string output_path = "dival_out";
  unsigned threads = 1;
  u64 memory_budget = kDefaultMemoryBudget;
  u64 seed = 0;

  json to_json() const {
    return {{"memory_budget", memory_budget}, {"seed", seed}};
  }
};

struct SieveCmd {
  std::string kind = "tau";
  unsigned k = 2;
  u64 lo = 1, hi = 1000;
  u64 block = 0;
  std::string format = "dvl1";
};

struct DeltaCmd {
  u64 X = 10'000;
  unsigned k = 2;
  std::string kind = "tau";
  std::optional<u64> d, D;
  std::optional<i64> a;
};

struct FamilyCmd {
  u64 X = 100'000;
  unsigned k = 4;
  std::string varpi = "1/1168";
  i64 a = 1;
};

struct ExpsumCmd {
  std::string kind = "kloosterman";
  u64 samples = 100;
  u64 q_max = 100;
  double constant = 1.0;
  std::string batch;
};

struct VarianceCmd {
  u64 X = 10'000;
  unsigned k = 2;
  std::optional<u64> d, D;
  u64 samples = 1'000'000;
  u64 prime_cutoff = 100'000;
};

struct BilinearCmd {
  u64 X = 1'000;
  unsigned k = 4;
  u64 D = 50;
  std::string second = "tau_k";
  std::string variant = "unrestricted";
  bool records = false;
};

struct ClassifyCmd {
  std::vector<std::string> nu;
  std::string varpi = "1/1168";
};

// ---------------------------------------------------------------------------

json run_sieve(const Global& g, const SieveCmd& c, Outputs& out) {
  if (c.lo > c.hi) throw config_error("--lo: must not exceed --hi");
  const auto kind = parse_kind(c.kind, c.k);
  SieveOptions opts{g.memory_budget};
  const std::string stem = "sieve_" + kind.name() + "_" + std::to_string(c.lo) + "_" + std::to_string(c.hi);
  auto emit_csv = [](std::ostream& os, const ArithmeticTable& t) {
    for (u64 n = t.lo(); n <= t.hi(); ++n)
      os << n << ',' << (t.exact() ? std::to_string(t.exact_at(n)) : format_double(t.at(n))) << '\n';
  };
  if (c.format == "csv") {
    auto os = out.open(stem + ".csv");
    os << "n,value\n";
    if (c.block) sieve_blocks(kind, c.lo, c.hi, c.block, [&](const ArithmeticTable& t) { emit_csv(os, t); }, opts);
    else emit_csv(os, sieve_table(kind, c.lo, c.hi, opts));
  } else {
    auto os = out.open(stem + ".dvl1");
    if (c.block) {
      // header once, then each block's values in order
      os.write(kTableMagic.data(), kTableMagic.size());
      detail::put_le(os, u64(kind.fn), 1);
      detail::put_le(os, kind.k, 1);
      detail::put_le(os, c.lo, 8);
      detail::put_le(os, c.hi, 8);
      sieve_blocks(kind, c.lo, c.hi, c.block, [&](const ArithmeticTable& t) {
        if (t.exact()) {
          for (i64 v : t.ints()) detail::put_le(os, u64(v), 8);
        } else {
          for (double v : t.reals()) detail::put_le(os, std::bit_cast<u64>(v), 8);
        }
      }, opts);
    } else {
      dump_table(os, sieve_table(kind, c.lo, c.hi, opts));
    }
  }
  return {{"kind", c.kind}, {"k", c.k}, {"lo", c.lo}, {"hi", c.hi}, {"block", c.block}, {"format", c.format}};
}

json run_delta(const Global& g, const DeltaCmd& c, Outputs& out) {
  if (c.d.has_value() == c.D.has_value()) throw config_error("delta: give exactly one of --d or --D");
  auto t = sieve_table(parse_kind(c.kind, c.k), 1, c.X, {g.memory_budget});
  if (!t.exact()) throw config_error("--kind: exact discrepancies need an integer-valued function");
  const u64 lo = c.d ? *c.d : 1, hi = c.d ? *c.d : *c.D;
  auto rows = parallel_map(
      hi - lo + 1,
      [&](std::size_t i) {
        const u64 d = lo + i;
        std::string s;
        DiscrepancyProfile prof(t, d);
        if (c.a) {
          if (gcd_signed(*c.a, d) == 1) s += csv_row(prof.at(*c.a)) + "\n";
        } else {
          for (const auto& r : prof.all()) s += csv_row(r) + "\n";
        }
        return s;
      },
      g.threads);
  if (c.a && c.d && gcd_signed(*c.a, *c.d) != 1) throw config_error("--a: gcd(a, d) must be 1");
  std::string body = std::string(kDeltaCsvHeader) + "\n";
  for (const auto& r : rows) body += r;
  out.write("delta.csv", body);
  json j{{"X", c.X}, {"k", c.k}, {"kind", c.kind}};
  j["d"] = c.d ? json(*c.d) : json(nullptr);
  j["D"] = c.D ? json(*c.D) : json(nullptr);
  j["a"] = c.a ? json(*c.a) : json(nullptr);
  return j;
}

json run_family(const Global& g, const FamilyCmd& c, Outputs& out, const json& config) {
  auto p = make_params(c.X, c.k, parse_exponent(c.varpi, "varpi"));
  auto fam = build_family(p, c.a);
  auto tau = sieve_table(TableKind::tau(c.k), 1, c.X, {g.memory_budget});
  std::string body = std::string(kDeltaCsvHeader) + "\n";
  for (u64 d : fam.members) body += csv_row(delta(tau, d, c.a)) + "\n";
  out.write("family.csv", body);
  auto j = report_json(theorem1_experiment(p, c.a, fam, tau, g.threads));
  j["config"] = config;
  out.write("theorem1.json", dump(j));
  return j;
}

std::string join_params(const std::vector<std::pair<std::string, i64>>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += (s.empty() ? "" : ";") + k + "=" + std::to_string(v);
  return s;
}

ExpSumResult eval_expsum(const std::string& kind, std::map<std::string, i64> p, double constant) {
  auto need = [&](const char* key) {
    auto it = p.find(key);
    if (it == p.end()) throw config_error(kind + ": missing parameter '" + key + "'");
    return it->second;
  };
  auto pos = [&](const char* key) {
    i64 v = need(key);
    if (v < 1) throw config_error(kind + ": parameter '" + key + "' must be >= 1");
    return u64(v);
  };
  if (kind == "ramanujan") {
    const u64 q = pos("q");
    const i64 n = need("n");
    // |C_q(n)| <= gcd(n, q)
    return make_result({double(ramanujan(q, n)), 0.0}, double(gcd_signed(n, q)), constant);
  }
  if (kind == "kloosterman") return kloosterman(need("a"), need("b"), pos("q"), constant);
  if (kind == "incomplete_kloosterman")
    return incomplete_kloosterman(need("c1"), pos("d1"), need("c2"), pos("d2"), need("ell"), pos("N"), constant);
  if (kind == "minsum") return minsum(need("c"), pos("d"), double(pos("H")), pos("N"), 0.1, constant);
  if (kind == "birch_bombieri") return birch_bombieri_T(need("k"), need("m1"), need("m2"), pos("q"), constant);
  throw config_error("--kind: unknown exponential sum '" + kind + "'");
}

std::vector<std::pair<std::string, i64>> random_params(const std::string& kind, u64 q_max,
                                                       std::mt19937_64& rng) {
  auto below = [&](u64 n) { return i64(rng() % n); };
  auto squarefree = [&](u64 hi) {
    while (true) {
      u64 q = 1 + rng() % hi;
      if (is_squarefree(q)) return i64(q);
    }
  };
  if (kind == "ramanujan") return {{"q", 1 + below(q_max)}, {"n", below(1001) - 500}};
  if (kind == "kloosterman") {
    i64 q = 1 + below(q_max);
    return {{"a", below(u64(q))}, {"b", below(u64(q))}, {"q", q}};
  }
  if (kind == "incomplete_kloosterman") {
    while (true) {
      i64 d1 = squarefree(q_max), d2 = squarefree(q_max);
      if (d1 * d2 <= 10 || d1 * d2 > 100'000) continue;
      return {{"c1", below(u64(d1))}, {"d1", d1}, {"c2", below(u64(d2))}, {"d2", d2},
              {"ell", below(100)}, {"N", 1 + below(10'000)}};
    }
  }
  if (kind == "minsum") {
    while (true) {
      i64 d = 1 + below(q_max), c = below(u64(d));
      if (gcd_signed(c, u64(d)) != 1) continue;
      return {{"c", c}, {"d", d}, {"H", 2 + below(100)}, {"N", 2 + below(1000)}};
    }
  }
  if (kind == "birch_bombieri")
    return {{"k", below(301) - 150}, {"m1", below(301) - 150}, {"m2", below(301) - 150},
            {"q", squarefree(std::min<u64>(q_max, 300))}};
  throw config_error("--kind: unknown exponential sum '" + kind + "'");
}

json run_expsum(const Global& g, const ExpsumCmd& c, Outputs& out) {
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, i64>>>> jobs;
  if (!c.batch.empty()) {
    // lines: kind,key=value;key=value
    std::ifstream in(c.batch);
    if (!in) throw config_error("--batch: cannot open " + c.batch);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#' || line.rfind("sum_kind", 0) == 0) continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) throw config_error("--batch: line " + std::to_string(lineno) + ": expected kind,params");
      std::vector<std::pair<std::string, i64>> kv;
      std::stringstream ps(line.substr(comma + 1));
      std::string item;
      while (std::getline(ps, item, ';')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw config_error("--batch: line " + std::to_string(lineno) + ": bad parameter '" + item + "'");
        try {
          kv.emplace_back(item.substr(0, eq), std::stoll(item.substr(eq + 1)));
        } catch (const std::logic_error&) {
          throw config_error("--batch: line " + std::to_string(lineno) + ": bad value in '" + item + "'");
        }
      }
      jobs.emplace_back(line.substr(0, comma), std::move(kv));
    }
  } else {
    std::mt19937_64 rng(g.seed);
    for (u64 i = 0; i < c.samples; ++i) jobs.emplace_back(c.kind, random_params(c.kind, c.q_max, rng));
  }
  auto rows = parallel_map(
      jobs.size(),
      [&](std::size_t i) {
        const auto& [kind, kv] = jobs[i];
        std::map<std::string, i64> m(kv.begin(), kv.end());
        return csv_row(kind, join_params(kv), eval_expsum(kind, m, c.constant));
      },
      g.threads);
  std::string body = std::string(kExpSumCsvHeader) + "\n";
  for (const auto& r : rows) body += r + "\n";
  out.write("expsum.csv", body);
  return {{"kind", c.kind}, {"samples", c.samples}, {"q_max", c.q_max}, {"constant", c.constant}, {"batch", c.batch}};
}

json run_variance(const Global& g, const VarianceCmd& c, Outputs& out, const json& config) {
  if (c.d.has_value() == c.D.has_value()) throw config_error("variance: give exactly one of --d or --D");
  auto tau = sieve_table(TableKind::tau(c.k), 1, c.X, {g.memory_budget});
  json j;
  if (c.d) {
    j = report_json(conjecture_report(tau, *c.d, {c.samples, g.seed, c.prime_cutoff, g.threads}));
  } else {
    j = report_json(theorem13_experiment(tau, *c.D, g.threads));
    j["samples"] = 0;
    j["seed"] = g.seed;
  }
  j["config"] = config;
  out.write("variance.json", dump(j));
  return j;
}

json run_bilinear(const Global& g, const BilinearCmd& c, Outputs& out, const json& config) {
  const auto second = c.second == "tau_k" ? SecondFactor::tau_k : SecondFactor::von_mangoldt;
  const auto variant = c.variant == "unrestricted" ? BilinearVariant::unrestricted
                                                   : BilinearVariant::coprime_restricted;
  if (c.records) {
    auto t1 = sieve_table(TableKind::tau(c.k), 1, c.X, {g.memory_budget});
    auto t2 = second == SecondFactor::tau_k ? t1 : sieve_table(TableKind::von_mangoldt(), 1, c.X, {g.memory_budget});
    auto rows = parallel_map(
        c.D,
        [&](std::size_t i) {
          const u64 d = i + 1;
          BilinearProfile prof(t1, t2, d);
          std::string s;
          for (u64 a = 0; a < d; ++a)
            if (std::gcd(a, d) == 1) s += csv_row(prof.at(i64(a), variant)) + "\n";
          return s;
        },
        g.threads);
    std::string body = std::string(kBilinearCsvHeader) + "\n";
    for (const auto& r : rows) body += r;
    out.write("bilinear.csv", body);
  }
  auto j = report_json(theorem14_experiment(c.k, c.X, c.D, second, variant, g.threads));
  j["config"] = config;
  out.write("theorem14.json", dump(j));
  return j;
}

json run_classify(const ClassifyCmd& c, Outputs& out) {
  const auto varpi = parse_exponent(c.varpi, "varpi");
  std::string body = "nu,case\n";
  for (const auto& spec : c.nu) {
    std::vector<double> nu;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double x = 0;
      auto res = std::from_chars(item.data(), item.data() + item.size(), x);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size())
        throw config_error("--nu: bad number '" + item + "'");
      nu.push_back(x);
    }
    auto kase = classify_case(CaseVector::make(nu, varpi), varpi);
    std::string joined;
    for (double x : nu) joined += (joined.empty() ? "" : ";") + format_double(x);
    body += joined + "," + to_string(kase) + "\n";
    std::cout << spec << " -> " << to_string(kase) << "\n";
  }
  out.write("classify.csv", body);
  return {{"nu", c.nu}, {"varpi", c.varpi}};
}

bool run_verify(const Global& g, Outputs& out) {
  json reports = json::object();
  auto criteria = acceptance::primary_criteria(
      [&](const std::string& name, const std::string& text) { reports[name] = json::parse(text); });
  json summary;
  summary["criteria"] = json::array();
  bool all = true;
  for (const auto& c : criteria) {
    auto r = acceptance::run(c, g.threads);
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n" << std::flush;
    summary["criteria"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  summary["passed"] = all;
  summary["reports"] = reports;
  out.write("verify.json", dump(summary));
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dival: divisor-function discrepancies, characters, exponential sums and variances"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config, "key=value file; command-line values win");
  app.add_option("--output_path", g.output_path, "directory for artifacts and manifest.json");
  app.add_option("--threads,--thread_count", g.threads, "worker threads")->envname("DIVAL_THREADS")->check(CLI::Range(1u, 1024u));
  app.add_option("--memory_budget", g.memory_budget, "sieve memory budget in bytes")->check(CLI::Range(u64{1}, ~u64{0}));
  app.add_option("--seed", g.seed, "random seed");

  const auto in_x = CLI::Range(u64{1}, kMaxSieveBound);

  SieveCmd sc;
  auto* sieve = app.add_subcommand("sieve", "dump a table of f(n) on [lo, hi]")->fallthrough();
  sieve->add_option("--kind", sc.kind)->check(CLI::IsMember(kKinds));
  sieve->add_option("--k", sc.k)->check(CLI::Range(1u, 64u));
  sieve->add_option("--lo", sc.lo)->check(in_x);
  sieve->add_option("--hi", sc.hi)->check(in_x);
  sieve->add_option("--block", sc.block, "sieve in blocks of this size (0: one shot)");
  sieve->add_option("--format", sc.format)->check(CLI::IsMember({"dvl1", "csv"}));

  DeltaCmd dc;
  auto* del = app.add_subcommand("delta", "discrepancies Delta(f; X, d, a) as CSV")->fallthrough();
  del->add_option("--X", dc.X)->check(in_x);
  del->add_option("--k", dc.k)->check(CLI::Range(1u, 64u));
  del->add_option("--kind", dc.kind)->check(CLI::IsMember({"tau", "moebius", "euler_phi", "unit"}));
  del->add_option("--d", dc.d, "single modulus")->check(CLI::Range(u64{1}, u64{100'000}));
  del->add_option("--D", dc.D, "all moduli d <= D")->check(CLI::Range(u64{1}, u64{100'000}));
  del->add_option("--a", dc.a, "residue (default: every reduced residue)");

  FamilyCmd fc;
  auto* fam = app.add_subcommand("family", "moduli family and the family-sum report")->fallthrough();
  fam->add_option("--X", fc.X)->check(in_x);
  fam->add_option("--k", fc.k)->check(CLI::Range(1u, 64u));
  fam->add_option("--varpi", fc.varpi, "rational p/q in (0, 1/2)");
  fam->add_option("--a", fc.a);

  ExpsumCmd ec;
  auto* exs = app.add_subcommand("expsum", "batch exponential sums against their bounds")->fallthrough();
  exs->add_option("--kind", ec.kind)
      ->check(CLI::IsMember({"ramanujan", "kloosterman", "incomplete_kloosterman", "minsum", "birch_bombieri"}));
  exs->add_option("--samples", ec.samples)->check(CLI::Range(u64{1}, u64{10'000'000}));
  exs->add_option("--q_max", ec.q_max)->check(CLI::Range(u64{1}, u64{100'000}));
  exs->add_option("--constant", ec.constant)->check(CLI::PositiveNumber);
  exs->add_option("--batch", ec.batch, "CSV of kind,key=value;... lines instead of random samples");

  VarianceCmd vc;
  auto* var = app.add_subcommand("variance", "variance over residue classes: one d, or all d <= D")->fallthrough();
  var->add_option("--X", vc.X)->check(in_x);
  var->add_option("--k", vc.k)->check(CLI::Range(1u, 64u));
  var->add_option("--d", vc.d)->check(CLI::Range(u64{1}, u64{100'000}));
  var->add_option("--D", vc.D)->check(CLI::Range(u64{1}, u64{100'000}));
  var->add_option("--samples", vc.samples)->check(CLI::Range(u64{10'000}, u64{1'000'000'000}));
  var->add_option("--prime_cutoff", vc.prime_cutoff)->check(CLI::Range(u64{2}, u64{1'000'000}));

  BilinearCmd bc;
  auto* bil = app.add_subcommand("bilinear", "bilinear sums over m = a n (mod d)")->fallthrough();
  bil->add_option("--X", bc.X)->check(CLI::Range(u64{1}, u64{10'000'000}));
  bil->add_option("--k", bc.k)->check(CLI::Range(1u, 64u));
  bil->add_option("--D", bc.D)->check(CLI::Range(u64{1}, u64{100'000}));
  bil->add_option("--second", bc.second)->check(CLI::IsMember({"tau_k", "von_mangoldt"}));
  bil->add_option("--variant", bc.variant)->check(CLI::IsMember({"unrestricted", "coprime_restricted"}));
  bil->add_flag("--records", bc.records, "also write every E(d, a) to bilinear.csv");

  ClassifyCmd cc;
  auto* cls = app.add_subcommand("classify", "A/B/C case of exponent vectors")->fallthrough();
  cls->add_option("--nu", cc.nu, "comma-separated nonincreasing exponents (repeatable)")->required();
  cls->add_option("--varpi", cc.varpi);

  auto* ver = app.add_subcommand("verify", "run the acceptance suite")->fallthrough();

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    std::reverse(args.begin(), args.end());
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  Outputs out(g.output_path);
  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  json config = {{"command", name}, {"global", g.to_json()}};
  try {
    json params;
    bool ok = true;
    if (sub == sieve) {
      params = run_sieve(g, sc, out);
    } else if (sub == del) {
      params = run_delta(g, dc, out);
    } else if (sub == fam) {
      params = {{"X", fc.X}, {"k", fc.k}, {"varpi", fc.varpi}, {"a", fc.a}};
      config["params"] = params;
      run_family(g, fc, out, config);
    } else if (sub == exs) {
      params = run_expsum(g, ec, out);
    } else if (sub == var) {
      params = {{"X", vc.X}, {"k", vc.k}, {"samples", vc.samples}, {"prime_cutoff", vc.prime_cutoff}};
      params["d"] = vc.d ? json(*vc.d) : json(nullptr);
      params["D"] = vc.D ? json(*vc.D) : json(nullptr);
      config["params"] = params;
      run_variance(g, vc, out, config);
    } else if (sub == bil) {
      params = {{"X", bc.X}, {"k", bc.k}, {"D", bc.D}, {"second", bc.second},
                {"variant", bc.variant}, {"records", bc.records}};
      config["params"] = params;
      run_bilinear(g, bc, out, config);
    } else if (sub == cls) {
      params = run_classify(cc, out);
    } else if (sub == ver) {
      ok = run_verify(g, out);
    }
    config["params"] = params;
    out.finish(name, config, {{"threads", g.threads}, {"output_path", g.output_path}});
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    out.discard();
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
