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

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace weylmult::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Run {
  int code = -1;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "weylmult_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// J_{2,2}(V): equal sums and sums of squares force equal multisets.
int j22(int V) { return 2 * V * V - V; }

TEST(Cli, VmvtPinnedValue) {
  const auto r = invoke({"vmvt", "--r", "2", "--d", "2", "--V", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["J"], j22(3));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["subcommand"], "vmvt");
  EXPECT_EQ(j["params"]["r"], 2);
  EXPECT_EQ(j["params"]["d"], 2);
  EXPECT_EQ(j["params"]["V"], 3);
  EXPECT_EQ(j["params"]["seed"], 0);
}

TEST(Cli, SharpnessMeetsPrimeCount) {
  const auto r = invoke({"sharpness", "--phase", "sqrt:2*x", "--N", "1000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["lower_bound"], 73.0);
  EXPECT_GE(j["abs_sum"].get<double>(), 73.0);
  EXPECT_TRUE(j["meets_tenth_bound"].get<bool>());
}

TEST(Cli, UnknownFlagWritesNothing) {
  const auto out = temp_path("unknown.json");
  const auto r = invoke({"vmvt", "--r", "2", "--d", "2", "--V", "3", "--bogus", "1", "--out", out.string()});
  EXPECT_EQ(r.code, kExitParameter);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(r.err.rfind("error: parameter: ", 0), 0u) << r.err;
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
}

TEST(Cli, ParameterAndResourceExits) {
  EXPECT_EQ(invoke({"vmvt", "--r", "2"}).code, kExitParameter);
  EXPECT_EQ(invoke({}).code, kExitParameter);
  const auto bad = invoke({"partition", "--N", "32"});
  EXPECT_EQ(bad.code, kExitParameter);
  EXPECT_EQ(bad.err.rfind("error: parameter: ", 0), 0u);
  const auto out = temp_path("refused.json");
  const auto big = invoke({"vmvt", "--r", "6", "--d", "3", "--V", "3000", "--out", out.string()});
  EXPECT_EQ(big.code, kExitResource);
  EXPECT_EQ(big.err.rfind("error: resource: ", 0), 0u) << big.err;
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(invoke({"primes", "--limit", "200000000"}).code, kExitResource);
  EXPECT_EQ(invoke({"sum", "--phase", "x/2", "--N", "10", "--format", "csv"}).code, kExitParameter);
  EXPECT_EQ(invoke({"partition", "--N", "100", "--s", "1,5"}).code, kExitParameter);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("vmvt"), std::string::npos);
}

TEST(Cli, ConfigMergedUnderFlags) {
  const auto cfg = temp_path("cfg.json");
  std::ofstream(cfg) << R"({"subcommand": "vmvt", "r": 2, "d": 2, "V": 3})";
  auto r = invoke({"--config", cfg.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["J"], j22(3));
  r = invoke({"vmvt", "--config", cfg.string(), "--V", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["J"], j22(4));
  EXPECT_EQ(json::parse(r.out)["params"]["V"], 4);

  std::ofstream(cfg) << R"({"subcommand": "vmvt", "r": 2, "d": 2, "V": 3, "colour": "red"})";
  EXPECT_EQ(invoke({"--config", cfg.string()}).code, kExitParameter);
  EXPECT_EQ(invoke({"--config", temp_path("missing.json").string()}).code, kExitParameter);

  std::ofstream(cfg) << R"({"N": 1000, "stats": true, "seed": 5})";
  r = invoke({"roots", "--poly", "x^2+1", "--config", cfg.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["params"]["seed"], 5);
  EXPECT_EQ(j["stats"]["mult_violations"], 0);
}

TEST(Cli, ByteIdenticalAcrossThreadCounts) {
  const std::vector<std::vector<std::string>> cases{
      {"sum", "--f", "mobius", "--phase", "sqrt:2*x^2", "--N", "30000", "--report", "7,0"},
      {"partition", "--N", "4096", "--s", "64", "--weight", "phase"},
      {"equidist", "--phase", "sqrt:2*x", "--N", "20000", "--h1", "2", "--h2", "3", "--discrepancy",
       "--hooley", "1"},
      {"roots", "--poly", "x^3-2", "--N", "5000", "--stats", "--seed", "9"},
      {"vmvt", "--r", "3", "--d", "2", "--V", "12"},
      {"sharpness", "--phase", "sqrt:2*x^2 + golden*x", "--N", "2000"},
  };
  int idx = 0;
  for (auto args : cases) {
    std::string first;
    for (const char* threads : {"1", "4"}) {
      const auto out = temp_path("det" + std::to_string(idx) + "_" + threads + ".json");
      auto a = args;
      a.insert(a.end(), {"--threads", threads, "--out", out.string()});
      const auto r = invoke(a);
      ASSERT_EQ(r.code, kExitOk) << r.err;
      EXPECT_TRUE(r.out.empty());
      const std::string text = slurp(out);
      if (first.empty()) {
        first = text;
      } else {
        EXPECT_EQ(first, text) << args[0];
      }
    }
    ++idx;
  }
}

TEST(Cli, ParamsEchoResolvedConfig) {
  const auto r = invoke({"equidist", "--phase", "sqrt:2*x", "--N", "500"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto p = json::parse(r.out)["params"];
  EXPECT_EQ(p["poly"], "x^2+1");
  EXPECT_EQ(p["phase"], "sqrt:2*x");
  EXPECT_EQ(p["N"], 500);
  EXPECT_EQ(p["h1"], 1);
  EXPECT_EQ(p["h2"], 0);
  EXPECT_EQ(p["format"], "json");
}

TEST(Cli, RootsCsvTable) {
  const auto out = temp_path("roots.csv");
  const auto r = invoke({"roots", "--poly", "x^2+1", "--N", "65", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(slurp(out));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 66u);
  EXPECT_EQ(lines[0], "n,rho,roots");
  EXPECT_EQ(lines[1], "1,1,0");
  EXPECT_EQ(lines[3], "3,0,");
  EXPECT_EQ(lines[5], "5,2,2 3");
  EXPECT_EQ(lines[65], "65,4,8 18 47 57");
}

TEST(Cli, OtherSubcommands) {
  auto j = json::parse(invoke({"primes", "--limit", "1000", "--from", "500"}).out);
  EXPECT_EQ(j["count"], 168);
  EXPECT_EQ(j["count_in_range"], 73);

  j = json::parse(invoke({"charsum", "--k", "4", "--chi-index", "1", "--phase", "x/2", "--N", "8"}).out);
  EXPECT_NEAR(j["sum_re"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["sum_im"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(j["chi"]["conductor"], 4);

  j = json::parse(invoke({"charsum", "--k", "5", "--chi-index", "2", "--phase", "x/2", "--N", "10",
                          "--complete", "x"})
                      .out);
  EXPECT_NEAR(j["complete_sum"]["normalized"].get<double>(), 1.0, 1e-9);

  j = json::parse(invoke({"approx", "--alpha", "pi", "--R", "100"}).out);
  EXPECT_EQ(j["a"], 1);
  EXPECT_EQ(j["q"], 7);
  EXPECT_TRUE(j["certificate_holds"].get<bool>());

  j = json::parse(invoke({"approx", "--phase", "x/2", "--N", "10000", "--B", "1"}).out);
  EXPECT_EQ(j["label"], "major");
  EXPECT_EQ(j["per_ell"][0]["q"], 2);

  j = json::parse(invoke({"partition", "--N", "100"}).out);
  EXPECT_TRUE(j["bit_identical"].get<bool>());
  EXPECT_EQ(j["max_multiplicity"], 1);

  j = json::parse(invoke({"sum", "--f", "unit", "--phase", "x/2", "--N", "1000"}).out);
  EXPECT_NEAR(j["sum"]["abs"].get<double>(), 0.0, 1e-12);

  j = json::parse(invoke({"sum", "--f", "extremal", "--phase", "sqrt:2*x", "--N", "1000"}).out);
  EXPECT_GE(j["sum"]["abs"].get<double>(), j["extremal"]["lower_bound"].get<double>());

  const auto out = temp_path("trend.csv");
  ASSERT_EQ(invoke({"equidist", "--phase", "sqrt:2*x", "--N", "5000", "--out", out.string()}).code, kExitOk);
  const std::string csv = slurp(out);
  EXPECT_EQ(csv.rfind("N,rho_sum,normalized,discrepancy\n100,", 0), 0u) << csv;
  EXPECT_NE(csv.find("\n5000,"), std::string::npos);
}

}  // namespace
}  // namespace weylmult::cli
