// Copyright 2026 The weylmult Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/characters.hpp"
#include "weylmult/congruence.hpp"
#include "weylmult/equidist.hpp"
#include "weylmult/multfunc.hpp"
#include "weylmult/partition.hpp"
#include "weylmult/phase.hpp"
#include "weylmult/vinogradov.hpp"
#include "weylmult/weylsum.hpp"

namespace weylmult::cli {
namespace {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
/// Largest sieve the CLI will allocate (4 bytes per entry).
inline constexpr u64 kCliSieveLimit = 100'000'000;

// ---------------------------------------------------------------------------
// Parsing and formatting helpers.

double parse_real(const std::string& text, const char* what) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  detail::require<ParameterError>(ec == std::errc() && ptr == last && std::isfinite(v),
                                  std::string(what) + ": not a decimal number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

u64 parse_u64(const std::string& text, const char* what) {
  u64 v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  detail::require<ParameterError>(ec == std::errc() && ptr == text.data() + text.size(),
                                  std::string(what) + ": not a nonnegative integer: '" + text + "'");
  return v;
}

std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json cplx_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

json big_json(const bigint& b) {
  if (b >= 0 && b <= bigint(~u64{0})) return json(static_cast<u64>(b));
  return json(b.str());
}

json approx_json(const RationalApprox& ap, std::optional<FracFixed> alpha = std::nullopt) {
  json j{{"ell", ap.ell}, {"a", ap.a},   {"q", ap.q}, {"R", ap.R}, {"err", ap.err},
         {"residual_beta", ap.residual_beta}, {"next_q", ap.next_q}};
  if (alpha) j["certificate_holds"] = certificate_holds(*alpha, ap);
  return j;
}

PrimeSieve make_sieve(u64 limit) {
  if (limit > kCliSieveLimit)
    throw ResourceError("sieve up to " + std::to_string(limit) + " exceeds the CLI limit " +
                        std::to_string(kCliSieveLimit));
  return PrimeSieve(std::max<u64>(limit, 2));
}

MultiplicativeFunction named_function(const std::string& name) {
  if (name == "mobius") return mobius();
  if (name == "liouville") return liouville();
  if (name == "unit") return unit_function();
  throw ParameterError("unknown multiplicative function '" + name + "'");
}

// ---------------------------------------------------------------------------
// Subcommands.

struct Output {
  json params = json::object();
  json result = json::object();
  std::optional<std::string> csv;
};

struct Context {
  u64 seed = 0;
  bool want_csv = false;
};

struct Command {
  CLI::App* app = nullptr;
  bool csv = false;
  std::function<Output(const Context&)> handler;
};

const std::vector<std::string> kFunctions{"mobius", "liouville", "unit", "extremal"};

class Cli {
 public:
  Cli() {
    app_.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app_.require_subcommand(1);
    app_.add_option("--threads", threads_, "worker threads (overrides WEYL_THREADS)")
        ->check(CLI::Range(1, 1024));
    app_.add_option("--seed", seed_, "seed for sampled statistics")->capture_default_str();
    app_.add_option("--out", out_path_, "write the result to this file instead of stdout");
    app_.add_option("--format", format_, "json or csv (default: from --out extension, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
    app_.add_option("--config", config_path_, "JSON file of parameters; explicit flags win");
    add_primes();
    add_sum();
    add_sharpness();
    add_partition();
    add_vmvt();
    add_roots();
    add_equidist();
    add_charsum();
    add_approx();
  }

  CLI::App& app() { return app_; }
  const std::map<std::string, Command>& commands() const { return commands_; }
  std::optional<int> threads() const { return threads_; }
  u64 seed() const { return seed_; }
  const std::string& out_path() const { return out_path_; }
  const std::string& format() const { return format_; }

  const Command* selected() const {
    for (const auto& [name, cmd] : commands_)
      if (cmd.app->parsed()) return &cmd;
    return nullptr;
  }

 private:
  CLI::App* sub(const std::string& name, const std::string& help, bool csv,
                std::function<Output(const Context&)> h) {
    CLI::App* a = app_.add_subcommand(name, help);
    a->fallthrough();
    commands_[name] = Command{a, csv, std::move(h)};
    return a;
  }

  void add_primes() {
    struct O {
      u64 limit = 0, from = 0;
      bool list = false;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("primes", "prime counts from the sieve", true, [o](const Context& ctx) {
      const PrimeSieve s = make_sieve(o->limit);
      detail::require<ParameterError>(o->from < o->limit, "primes: --from must be below --limit");
      Output out;
      out.params = {{"limit", o->limit}, {"from", o->from}, {"list", o->list}};
      out.result["count"] = s.prime_count(o->limit);
      out.result["count_in_range"] = s.prime_count(o->limit) - s.prime_count(o->from);
      std::vector<u64> ps;
      if (o->list || ctx.want_csv)
        for (u64 p : s.primes())
          if (p > o->from && p <= o->limit) ps.push_back(p);
      if (o->list) out.result["primes"] = ps;
      if (ctx.want_csv) {
        std::string csv = "p\n";
        for (u64 p : ps) csv += std::to_string(p) + "\n";
        out.csv = csv;
      }
      return out;
    });
    a->add_option("--limit", o->limit, "sieve limit")->required();
    a->add_option("--from", o->from, "count primes in (from, limit]")->capture_default_str();
    a->add_flag("--list", o->list, "include the primes in the JSON output");
  }

  void add_sum() {
    struct O {
      std::string f = "mobius", phase, report, R;
      u64 N = 0;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("sum", "sum of f(n) e(F(n)) over n <= N", false, [o](const Context&) {
      const PolyPhase F = parse_phase(o->phase);
      const PrimeSieve s = make_sieve(o->N);
      Output out;
      out.params = {{"f", o->f}, {"phase", o->phase}, {"N", o->N}};
      std::vector<cplx> values;
      if (o->f == "extremal") {
        const auto ex = extremal_construct(F, s, o->N);
        values = sieve_values(ex.f, s, o->N);
        out.result["extremal"] = {{"z0", cplx_json(ex.z0)}, {"lower_bound", ex.lower_bound}};
      } else {
        values = sieve_values(named_function(o->f), s, o->N);
      }
      out.result["sum"] = cplx_json(weyl_sum(values, F, o->N));
      if (!o->report.empty()) {
        const auto parts = split(o->report, ',');
        detail::require<ParameterError>(parts.size() == 2, "sum: --report expects 'r,A'");
        const int r = static_cast<int>(parse_u64(parts[0], "--report r"));
        const double A = parse_real(parts[1], "--report A");
        BoundOptions bo;
        if (!o->R.empty()) bo.R = parse_real(o->R, "--R");
        const auto rep = theorem1_report(values, F, o->N, r, A, bo);
        out.params["report"] = o->report;
        if (!o->R.empty()) out.params["R"] = o->R;
        json cands = json::array();
        for (const auto& c : rep.candidates)
          cands.push_back({{"approx", approx_json(c.approx, F.coeff(c.approx.ell))},
                           {"rhs_arc", c.rhs_arc},
                           {"rhs_tail", c.rhs_tail},
                           {"rhs_total", c.rhs_total},
                           {"q_in_window", c.q_in_window}});
        out.result["report"] = {{"N", rep.N},
                                {"r", rep.r},
                                {"A", rep.A},
                                {"C", rep.C()},
                                {"lhs", rep.lhs},
                                {"rhs_main", rep.rhs_main},
                                {"rhs_arc", rep.rhs_arc},
                                {"rhs_tail", rep.rhs_tail},
                                {"ratio", rep.ratio},
                                {"approx", approx_json(rep.approx, F.coeff(rep.approx.ell))},
                                {"q_in_window", rep.q_in_window},
                                {"candidates", cands}};
      }
      return out;
    });
    a->add_option("--f", o->f, "multiplicative function")
        ->check(CLI::IsMember(kFunctions))
        ->capture_default_str();
    a->add_option("--phase", o->phase, "phase polynomial, e.g. 'sqrt:2*x^2 + golden*x'")->required();
    a->add_option("--N", o->N, "length of the sum")->required();
    a->add_option("--report", o->report, "emit the bound report for 'r,A'");
    a->add_option("--R", o->R, "approximation range for the report (default N^{ell/2})");
  }

  void add_sharpness() {
    struct O {
      std::string phase;
      u64 N = 0, grid = 0;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("sharpness", "extremal multiplicative function for a phase", false,
                  [o](const Context&) {
                    const PolyPhase F = parse_phase(o->phase);
                    const PrimeSieve s = make_sieve(o->N);
                    const auto ex = extremal_construct(F, s, o->N, o->grid);
                    const double tenth = static_cast<double>(o->N) / (10.0 * std::log(static_cast<double>(o->N)));
                    Output out;
                    out.params = {{"phase", o->phase}, {"N", o->N}, {"grid", ex.grid_size}};
                    out.result = {{"z0", cplx_json(ex.z0)},
                                  {"turn", ex.turn},
                                  {"sum", cplx_json(ex.sum_value)},
                                  {"abs_sum", std::abs(ex.sum_value)},
                                  {"lower_bound", ex.lower_bound},
                                  {"n_over_10_log_n", tenth},
                                  {"meets_lower_bound", std::abs(ex.sum_value) >= ex.lower_bound},
                                  {"meets_tenth_bound", std::abs(ex.sum_value) >= tenth},
                                  {"g_at_zero", ex.g_at_zero},
                                  {"g_at_z0", ex.g_at_z0},
                                  {"grid_max", ex.grid_max},
                                  {"grid_size", ex.grid_size},
                                  {"certified", ex.certified}};
                    return out;
                  });
    a->add_option("--phase", o->phase, "phase polynomial")->required();
    a->add_option("--N", o->N, "length of the sum (>= 100)")->required();
    a->add_option("--grid", o->grid, "grid points on the circle (0: max(4096, 8N))")->capture_default_str();
  }

  void add_partition() {
    struct O {
      u64 N = 0;
      std::string s = "64", weight = "unit", phase = "sqrt:2*x", f = "mobius";
    };
    auto o = std::make_shared<O>();
    auto* a = sub("partition", "rectangle partition of the hyperbola region", false, [o](const Context&) {
      const double s = parse_real(o->s, "--s");
      const auto sc = build_partition(o->N, s);
      const PrimeSieve sv = make_sieve(o->N);
      Output out;
      out.params = {{"N", o->N}, {"s", o->s}, {"weight", o->weight}};
      PartitionReport rep;
      if (o->weight == "unit") {
        rep = verify_partition(sc, sv, [](u64, u64) { return cplx(1.0); });
      } else {
        out.params["phase"] = o->phase;
        out.params["f"] = o->f;
        const PolyPhase F = parse_phase(o->phase);
        check_phase_range(F, o->N);
        const auto fv = sieve_values(named_function(o->f), sv, o->N);
        rep = verify_partition(sc, sv, [&](u64 p, u64 n) {
          return fv[n] * std::log(static_cast<double>(p)) * phase_exp(F, p * n);
        });
      }
      const bool bits = std::memcmp(&rep.direct_sum, &rep.partitioned_sum, sizeof(cplx)) == 0;
      const double scale = std::max(1.0, std::abs(rep.direct_sum));
      out.result = {{"J", sc.J},
                    {"main_rect_count", sc.main_rects.size()},
                    {"sub_rect_count", rep.sub_rect_count},
                    {"total_points", rep.total_points},
                    {"exceptional_count", rep.exceptional_count},
                    {"max_multiplicity", rep.max_multiplicity},
                    {"direct_sum", cplx_json(rep.direct_sum)},
                    {"partitioned_sum", cplx_json(rep.partitioned_sum)},
                    {"exceptional_sum", cplx_json(rep.exceptional_sum)},
                    {"bit_identical", bits},
                    {"relative_difference", std::abs(rep.direct_sum - rep.partitioned_sum) / scale},
                    {"min_p_width", rep.min_p_width},
                    {"min_n_width", rep.min_n_width},
                    {"min_area", rep.min_area},
                    {"area_threshold", rep.area_threshold},
                    {"area_threshold_note", "s/256 is derived from the construction"}};
      return out;
    });
    a->add_option("--N", o->N, "region size")->required();
    a->add_option("--s", o->s, "partition parameter in [1, N]")->capture_default_str();
    a->add_option("--weight", o->weight, "unit or phase: f(n) log(p) e(F(pn))")
        ->check(CLI::IsMember({"unit", "phase"}))
        ->capture_default_str();
    a->add_option("--phase", o->phase, "phase for --weight phase")->capture_default_str();
    a->add_option("--f", o->f, "coefficients for --weight phase")
        ->check(CLI::IsMember({"mobius", "liouville", "unit"}))
        ->capture_default_str();
  }

  void add_vmvt() {
    struct O {
      int r = 0, d = 0;
      u64 V = 0;
      std::string primes, intervals;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("vmvt", "solution counts of the Vinogradov system", true, [o](const Context& ctx) {
      Output out;
      out.params = {{"r", o->r}, {"d", o->d}};
      std::string csv = "V,J\n";
      if (!o->primes.empty()) {
        const auto parts = split(o->primes, ',');
        detail::require<ParameterError>(parts.size() == 2, "vmvt: --primes expects 'Y,X'");
        const u64 Y = parse_u64(parts[0], "--primes Y"), X = parse_u64(parts[1], "--primes X");
        const PrimeSieve s = make_sieve(Y + X);
        out.params["primes"] = o->primes;
        out.result["J"] = big_json(jrd_primes(Y, X, o->r, o->d, s));
        out.result["prime_count"] = s.prime_count(Y + X) - s.prime_count(Y == 0 ? 0 : Y - 1);
        out.result["slope_table"] = json::array();
      } else if (!o->intervals.empty()) {
        std::ifstream in(o->intervals);
        detail::require<ParameterError>(in.good(), "vmvt: cannot read " + o->intervals);
        std::vector<std::pair<i64, i64>> iv;
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#') continue;
          std::istringstream ls(line);
          i64 lo = 0, hi = 0;
          detail::require<ParameterError>(static_cast<bool>(ls >> lo >> hi),
                                          "vmvt: interval lines are 'lo hi': " + line);
          iv.emplace_back(lo, hi);
        }
        json ivj = json::array();
        for (auto [lo, hi] : iv) ivj.push_back({lo, hi});
        out.params["intervals"] = ivj;
        out.result["J"] = big_json(jrd_intervals(iv, o->r, o->d));
        out.result["slope_table"] = json::array();
      } else {
        detail::require<ParameterError>(o->V >= 1, "vmvt: --V is required without --primes/--intervals");
        out.params["V"] = o->V;
        std::vector<u64> chain;
        for (u64 v : {o->V / 4, o->V / 2, o->V})
          if (v >= 1 && (chain.empty() || chain.back() != v)) chain.push_back(v);
        std::vector<bigint> Js;
        for (u64 v : chain) Js.push_back(jrd(v, o->r, o->d));
        out.result["J"] = big_json(Js.back());
        json table = json::array();
        for (std::size_t i = 0; i + 1 < chain.size(); ++i)
          table.push_back({{"V_small", chain[i]},
                           {"V_large", chain[i + 1]},
                           {"J_small", big_json(Js[i])},
                           {"J_large", big_json(Js[i + 1])},
                           {"slope", slope_from(Js[i], Js[i + 1], chain[i], chain[i + 1])},
                           {"exponent", vinogradov_exponent(o->r, o->d)}});
        out.result["slope_table"] = table;
        for (std::size_t i = 0; i < chain.size(); ++i) csv += std::to_string(chain[i]) + "," + Js[i].str() + "\n";
      }
      if (ctx.want_csv) {
        detail::require<ParameterError>(o->V >= 1 && o->primes.empty() && o->intervals.empty(),
                                        "vmvt: CSV output is the V chain and needs plain --V mode");
        out.csv = csv;
      }
      return out;
    });
    a->add_option("--r", o->r, "variables per side")->required()->check(CLI::Range(1, 64));
    a->add_option("--d", o->d, "degree of the system")->required()->check(CLI::Range(1, 16));
    a->add_option("--V", o->V, "variables range over [1, V]");
    a->add_option("--primes", o->primes, "prime variables in [Y, Y+X], given as 'Y,X'");
    a->add_option("--intervals", o->intervals, "file of disjoint intervals 'lo hi' meaning (lo, hi]");
  }

  void add_roots() {
    struct O {
      std::string poly, A = "0", D = "2";
      u64 N = 0, pairs = 500;
      bool stats = false, allow_large = false, allow_asserted = false;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("roots", "roots of a polynomial modulo n <= N", true, [o](const Context& ctx) {
      const IntPoly p = IntPoly::parse(o->poly);
      const PrimeSieve s = make_sieve(o->N);
      const auto t = build_root_table(p, s, o->N, {o->allow_large, o->allow_asserted});
      const auto cert = irreducibility_check(p);
      Output out;
      out.params = {{"poly", o->poly}, {"N", o->N}};
      out.result = {{"poly", p.describe()},
                    {"degree", p.degree()},
                    {"disc", discriminant(p).str()},
                    {"irreducibility", {{"kind", to_string(cert.kind)}, {"prime", cert.prime}}},
                    {"rho_sum", t.rho_sum(o->N)},
                    {"mean_ratio", static_cast<double>(t.rho_sum(o->N)) / static_cast<double>(o->N)}};
      if (o->stats) {
        const double A = parse_real(o->A, "--A"), D = parse_real(o->D, "--D");
        out.params["A"] = o->A;
        out.params["D"] = o->D;
        out.params["pairs"] = o->pairs;
        out.params["seed"] = ctx.seed;
        const auto st = rho_stats(t, p, A, D, o->pairs, ctx.seed);
        out.result["stats"] = {{"mean_ratio", st.mean_ratio},
                               {"mean_ratio_half", st.mean_ratio_half},
                               {"wirsing_drift", std::abs(st.mean_ratio - st.mean_ratio_half) / st.mean_ratio},
                               {"second_moment_ratio", st.second_moment_ratio},
                               {"mult_pairs", st.mult_pairs},
                               {"mult_violations", st.mult_violations},
                               {"submult_pairs", st.submult_pairs},
                               {"submult_violations", st.submult_violations},
                               {"max_log_ratio", st.max_log_ratio}};
      }
      if (ctx.want_csv) {
        std::string csv = "n,rho,roots\n";
        for (u64 n = 1; n <= o->N; ++n) {
          csv += std::to_string(n) + "," + std::to_string(t.rho(n)) + ",";
          bool first = true;
          for (auto v : t.roots(n)) {
            if (!first) csv += ' ';
            csv += std::to_string(v);
            first = false;
          }
          csv += '\n';
        }
        out.csv = std::move(csv);
      }
      return out;
    });
    a->add_option("--poly", o->poly, "integer polynomial, e.g. 'x^2+1'")->required();
    a->add_option("--N", o->N, "largest modulus")->required();
    a->add_flag("--stats", o->stats, "report mean, moment and multiplicativity statistics");
    a->add_option("--A", o->A, "log exponent for the second moment")->capture_default_str();
    a->add_option("--D", o->D, "base of the submultiplicativity slack")->capture_default_str();
    a->add_option("--pairs", o->pairs, "sampled pairs per check")->capture_default_str();
    a->add_flag("--allow-large", o->allow_large, "permit N above 10^6");
    a->add_flag("--allow-asserted", o->allow_asserted, "accept polynomials not certified irreducible");
  }

  void add_equidist() {
    struct O {
      std::string poly = "x^2+1", phase;
      u64 N = 0, grid = 64;
      i64 h1 = 1, h2 = 0, hooley = 0;
      bool discrepancy = false;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("equidist", "joint distribution of (v/n, F(n))", true, [o](const Context& ctx) {
      const IntPoly p = IntPoly::parse(o->poly);
      const PolyPhase F = parse_phase(o->phase);
      const PrimeSieve s = make_sieve(o->N);
      const auto t = build_root_table(p, s, o->N);
      Output out;
      out.params = {{"poly", o->poly}, {"phase", o->phase}, {"N", o->N}, {"h1", o->h1}, {"h2", o->h2}};
      const cplx W = joint_weyl_sum(t, F, o->N, o->h1, o->h2);
      const double total = static_cast<double>(t.rho_sum(o->N));
      out.result = {{"rho_sum", t.rho_sum(o->N)}, {"sum", cplx_json(W)}, {"normalized", std::abs(W) / total}};
      if (o->discrepancy || ctx.want_csv) out.params["grid"] = o->grid;
      if (o->discrepancy) {
        const auto d = star_discrepancy_2d(joint_sequence(t, F, o->N), o->grid);
        out.result["discrepancy"] = {{"value", d.value}, {"slack", d.slack}, {"grid", d.grid_m}};
      }
      if (o->hooley != 0) {
        out.params["hooley"] = o->hooley;
        out.result["hooley_average"] = hooley_average(t, o->hooley, o->N);
      }
      if (ctx.want_csv) {
        std::vector<u64> Ns;
        for (u64 m = 100; m < o->N; m *= 10) Ns.push_back(m);
        Ns.push_back(o->N);
        std::string csv = "N,rho_sum,normalized,discrepancy\n";
        for (u64 m : Ns) {
          const double tot = static_cast<double>(t.rho_sum(m));
          const double nw = std::abs(joint_weyl_sum(t, F, m, o->h1, o->h2)) / tot;
          const auto d = star_discrepancy_2d(joint_sequence(t, F, m), o->grid);
          csv += std::to_string(m) + "," + std::to_string(t.rho_sum(m)) + "," + fmt_double(nw) + "," +
                 fmt_double(d.value) + "\n";
        }
        out.csv = std::move(csv);
      }
      return out;
    });
    a->add_option("--poly", o->poly, "irreducible integer polynomial")->capture_default_str();
    a->add_option("--phase", o->phase, "phase polynomial F")->required();
    a->add_option("--N", o->N, "largest modulus")->required();
    a->add_option("--h1", o->h1, "frequency on F(n)")->capture_default_str();
    a->add_option("--h2", o->h2, "frequency on v/n")->capture_default_str();
    a->add_flag("--discrepancy", o->discrepancy, "report the corner-grid discrepancy");
    a->add_option("--grid", o->grid, "grid size m for the discrepancy")->capture_default_str();
    a->add_option("--hooley", o->hooley, "report the Hooley average for this h != 0");
  }

  void add_charsum() {
    struct O {
      u64 k = 0, chi_index = 0, N = 0, q = 0;
      std::string phase, complete;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("charsum", "sum of chi(n) e(F(n)) over n <= N", false, [o](const Context&) {
      const auto g = std::make_shared<const CharGroup>(o->k);
      detail::require<ParameterError>(o->chi_index < g->order(),
                                      "charsum: --chi-index must be below phi(k) = " + std::to_string(g->order()));
      const auto chi = character_at(g, o->chi_index);
      const PolyPhase F = parse_phase(o->phase);
      const cplx S = mixed_char_sum(chi, F, o->N);
      Output out;
      out.params = {{"k", o->k}, {"chi_index", o->chi_index}, {"phase", o->phase}, {"N", o->N}};
      out.result = {{"k", o->k},
                    {"chi", {{"index", chi.index()},
                             {"exponents", chi.exponents()},
                             {"principal", chi.is_principal()},
                             {"conductor", conductor(chi)}}},
                    {"N", o->N},
                    {"sum_re", S.real()},
                    {"sum_im", S.imag()},
                    {"normalized", std::abs(S) / static_cast<double>(o->N)}};
      if (!o->complete.empty()) {
        const u64 q = o->q == 0 ? o->k : o->q;
        out.params["complete"] = o->complete;
        out.params["q"] = q;
        const auto cs = complete_twisted_sum(chi, detail::parse_int_poly(o->complete), q);
        out.result["complete_sum"] = {{"sum", cplx_json(cs.value)}, {"normalized", cs.normalized}};
      }
      return out;
    });
    a->add_option("--k", o->k, "modulus")->required();
    a->add_option("--chi-index", o->chi_index, "character index in [0, phi(k))")->capture_default_str();
    a->add_option("--phase", o->phase, "phase polynomial F")->required();
    a->add_option("--N", o->N, "length of the sum")->required();
    a->add_option("--complete", o->complete, "also sum chi(x) e(P(x)/q) over x mod k for this integer P");
    a->add_option("--q", o->q, "denominator for --complete (default k)");
  }

  void add_approx() {
    struct O {
      std::string alpha, R = "100", phase, B = "1";
      u64 N = 0;
    };
    auto o = std::make_shared<O>();
    auto* a = sub("approx", "continued-fraction approximations and arc labels", false, [o](const Context&) {
      Output out;
      if (!o->phase.empty()) {
        const PolyPhase F = parse_phase(o->phase);
        const double B = parse_real(o->B, "--B");
        const auto arc = classify_arc(F, o->N, B);
        out.params = {{"phase", o->phase}, {"N", o->N}, {"B", o->B}};
        json per = json::array();
        for (const auto& ap : arc.per_ell) per.push_back(approx_json(ap, F.coeff(ap.ell)));
        out.result = {{"threshold", arc.threshold}, {"label", arc.label()}, {"per_ell", per}};
      } else {
        detail::require<ParameterError>(!o->alpha.empty(), "approx: give --alpha or --phase");
        const FracFixed alpha = parse_coefficient(o->alpha);
        const auto ap = dirichlet_approx(alpha, parse_real(o->R, "--R"));
        out.params = {{"alpha", o->alpha}, {"R", o->R}};
        out.result = approx_json(ap, alpha);
      }
      return out;
    });
    a->add_option("--alpha", o->alpha, "coefficient: decimal, a/b, sqrt:k, golden or pi");
    a->add_option("--R", o->R, "denominator bound")->capture_default_str();
    a->add_option("--phase", o->phase, "classify every coefficient of this phase");
    a->add_option("--N", o->N, "length for --phase");
    a->add_option("--B", o->B, "log-power threshold for --phase")->capture_default_str();
  }

  CLI::App app_{"Exponential sums with multiplicative coefficients", "weylmult"};
  std::map<std::string, Command> commands_;
  std::optional<int> threads_;
  u64 seed_ = 0;
  std::string out_path_, format_, config_path_;
};

// ---------------------------------------------------------------------------
// Config merging: keys become flags placed before the explicit ones, and the
// last occurrence of an option wins.

std::string config_value(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) return v.dump();
  throw ParameterError("config key '" + key + "' must be a string, number or boolean");
}

std::vector<std::string> merge_config(Cli& cli, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      detail::require<ParameterError>(i + 1 < args.size(), "--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  detail::require<ParameterError>(in.good(), "cannot read config file " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError("config file " + path + " is not valid JSON: " + e.what());
  }
  detail::require<ParameterError>(cfg.is_object(), "config file must hold a JSON object");

  std::size_t sub_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i)
    if (cli.commands().count(args[i])) {
      sub_pos = i;
      break;
    }
  std::string sub_name = sub_pos < args.size() ? args[sub_pos] : "";
  if (cfg.contains("subcommand")) {
    const std::string named = cfg["subcommand"].get<std::string>();
    detail::require<ParameterError>(cli.commands().count(named) > 0, "config: unknown subcommand '" + named + "'");
    detail::require<ParameterError>(sub_name.empty() || sub_name == named,
                                    "config subcommand '" + named + "' conflicts with '" + sub_name + "'");
    sub_name = named;
  }
  detail::require<ParameterError>(!sub_name.empty(), "no subcommand given");
  CLI::App* sub = cli.commands().at(sub_name).app;

  std::vector<std::string> globals, locals;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "subcommand") continue;
    detail::require<ParameterError>(key != "config", "config files cannot nest --config");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    auto* target = &locals;
    if (opt == nullptr) {
      opt = cli.app().get_option_no_throw("--" + key);
      target = &globals;
    }
    detail::require<ParameterError>(opt != nullptr, "unknown config key '" + key + "'");
    if (value.is_boolean()) {
      detail::require<ParameterError>(opt->get_expected_max() == 0, "config key '" + key + "' is not a flag");
      if (value.get<bool>()) target->push_back("--" + key);
    } else {
      detail::require<ParameterError>(opt->get_expected_max() != 0, "config key '" + key + "' is a flag");
      target->push_back("--" + key);
      target->push_back(config_value(value, key));
    }
  }

  std::vector<std::string> merged = globals;
  if (sub_pos < args.size()) {
    merged.insert(merged.end(), args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1);
    merged.insert(merged.end(), locals.begin(), locals.end());
    merged.insert(merged.end(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, args.end());
  } else {
    merged.push_back(sub_name);
    merged.insert(merged.end(), locals.begin(), locals.end());
    merged.insert(merged.end(), args.begin(), args.end());
  }
  return merged;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int report_error(std::ostream& err, const std::string& tag, const std::string& msg, int code) {
  err << "error: " << tag << ": " << msg << "\n";
  return code;
}

class ThreadCountGuard {
 public:
  ThreadCountGuard() : saved_(thread_count()) {}
  ~ThreadCountGuard() { set_thread_count(saved_); }

 private:
  int saved_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ThreadCountGuard guard;
  Cli cli;
  try {
    const auto merged = merge_config(cli, args);
    std::vector<const char*> argv{"weylmult"};
    for (const auto& a : merged) argv.push_back(a.c_str());
    try {
      cli.app().parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << cli.app().help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      // a subcommand's own --help surfaces as CallForHelp through its parent
      if (e.get_exit_code() == 0) {
        out << cli.app().help();
        return kExitOk;
      }
      return report_error(err, "parameter", e.what(), kExitParameter);
    }

    const Command* cmd = cli.selected();
    if (cmd == nullptr) return report_error(err, "parameter", "no subcommand given", kExitParameter);
    if (cli.threads()) set_thread_count(*cli.threads());

    std::string format = cli.format();
    if (format.empty()) format = (cmd->csv && ends_with(cli.out_path(), ".csv")) ? "csv" : "json";
    if (format == "csv" && !cmd->csv)
      throw ParameterError(cmd->app->get_name() + " has no CSV output");

    Context ctx;
    ctx.seed = cli.seed();
    ctx.want_csv = format == "csv";
    Output res = cmd->handler(ctx);

    std::string text;
    if (ctx.want_csv) {
      text = *res.csv;
    } else {
      json doc;
      doc["schema_version"] = kSchemaVersion;
      doc["subcommand"] = cmd->app->get_name();
      json params = std::move(res.params);
      params["seed"] = ctx.seed;
      params["format"] = format;
      doc["params"] = std::move(params);
      for (auto& [k, v] : res.result.items()) doc[k] = v;
      text = doc.dump(2) + "\n";
    }

    if (cli.out_path().empty()) {
      out << text;
    } else {
      std::ofstream file(cli.out_path(), std::ios::binary);
      if (!file) throw ParameterError("cannot open output file " + cli.out_path());
      file << text;
      if (!file.flush()) throw ParameterError("failed writing output file " + cli.out_path());
    }
    return kExitOk;
  } catch (const ResourceError& e) {
    return report_error(err, e.tag(), e.what(), kExitResource);
  } catch (const Error& e) {
    return report_error(err, e.tag(), e.what(), kExitParameter);
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what(), kExitInternal);
  }
}

}  // namespace weylmult::cli
