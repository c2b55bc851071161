// Copyright 2026 The SBN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sbn/cli.h"
#include "sbn/games.h"

namespace sbn {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sbn");
  std::ostringstream out, err;
  Run r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Data(const std::string& name) {
  return std::string(SBN_TEST_DATA_DIR) + "/" + name;
}

fs::path TempDir() {
  fs::path dir = fs::temp_directory_path() / "sbn_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data rows of our CSV output (no quoted commas), header first.
std::vector<std::vector<std::string>> CsvRows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    rows.push_back(fields);
  }
  return rows;
}

// First column -> second column, for key,value tables.
std::map<std::string, std::string> KeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& row : CsvRows(text)) {
    if (row.size() >= 2) kv[row[0]] = row[1];
  }
  return kv;
}

std::map<std::string, std::string> Metadata(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    auto colon = line.find(": ");
    kv[line.substr(2, colon - 2)] = line.substr(colon + 2);
  }
  return kv;
}

TEST_CASE("nocount: table sums to one and agrees with the games module") {
  Run r = Invoke({"nocount", "--lambda", "1"});
  REQUIRE(r.code == 0);
  double total = 0.0;
  auto rows = CsvRows(r.out);
  REQUIRE(rows[0] == std::vector<std::string>{"g", "win_prob"});
  for (const auto& row : rows) {
    if (!row.empty() && std::isdigit(static_cast<unsigned char>(row[0][0]))) {
      total += std::stod(row[1]);
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  auto kv = KeyValues(r.out);
  ConstantGuessTable t = BestConstantGuess(1.0);
  CHECK(std::stoi(kv.at("g_star")) == t.g_star);
  CHECK(std::stod(kv.at("win_prob_star")) == t.win_prob);
  CHECK(kv.at("conjecture") == "1");
  CHECK(kv.at("n_max") == "14");
  auto meta = Metadata(r.out);
  CHECK(meta.at("tool") == std::string("sbn ") + kToolVersion);
  CHECK(meta.at("lambda") == "1");
}

TEST_CASE("nocount: large lambda gives a small normalized table") {
  Run r = Invoke({"nocount", "--lambda", "10", "--tail-tol", "1e-6"});
  REQUIRE(r.code == 0);
  auto kv = KeyValues(r.out);
  CHECK(kv.at("n_max") == "2");
  double total = 0.0;
  for (const char* g : {"0", "1", "2"}) total += std::stod(kv.at(g));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nocount: validation and capacity exit codes") {
  Run r = Invoke({"nocount", "--lambda", "0"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("lambda must be positive") != std::string::npos);
  r = Invoke({"nocount", "--lambda", "0.1"});
  CHECK(r.code == kExitCapacity);
  r = Invoke({"nocount", "--lambda", "0.1", "--clamp"});
  CHECK(r.code == kExitOk);
  CHECK(Invoke({"nocount", "--bogus"}).code == kExitUsage);
  CHECK(Invoke({"frobnicate"}).code == kExitUsage);
  CHECK(Invoke({}).code == kExitUsage);
}

TEST_CASE("asymmetry: length-2 fixture has gap one half") {
  Run r = Invoke({"asymmetry", "--point-mass-n", "2"});
  REQUIRE(r.code == 0);
  auto rows = CsvRows(r.out);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[1][0] == "reference");
  CHECK(rows[1][1] == "constant-1");
  CHECK(rows[1][2] == "counter");
  CHECK(std::stod(rows[1][3]) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::stod(rows[1][4]) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::stod(rows[1][5]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("asymmetry: positive gap and byte-identical reruns") {
  fs::path a = TempDir() / "asym_a.csv", b = TempDir() / "asym_b.csv";
  std::vector<std::string> args = {"asymmetry", "--lambda", "2", "--mc",
                                   "2000", "--seed", "11"};
  auto with_out = [&](const fs::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(Invoke(with_out(a)).code == 0);
  REQUIRE(Invoke(with_out(b)).code == 0);
  std::string text = Slurp(a);
  CHECK(text == Slurp(b));
  auto rows = CsvRows(text);
  CHECK(std::stod(rows[1][5]) > 0.0);
  CHECK(Metadata(text).at("seed") == "11");
  CHECK(Invoke({"asymmetry", "--lambda", "2", "--mc", "10"}).code ==
        kExitUsage);
}

TEST_CASE("asymmetry: support cap from the environment") {
  ::setenv("SBN_MAX_SUPPORT", "5", 1);
  Run r = Invoke({"asymmetry", "--point-mass-n", "3"});
  ::unsetenv("SBN_MAX_SUPPORT");
  CHECK(r.code == kExitCapacity);
  CHECK(r.err.find("max_support") != std::string::npos);
}

TEST_CASE("letsplay: equilibrium opponent on RPS scores zero") {
  Run r = Invoke({"letsplay", "--pool", Data("pool_rps.json"), "--b-members",
                  "uniform", "--mc", "20000", "--seed", "1"});
  REQUIRE(r.code == 0);
  auto rows = CsvRows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(std::stod(rows[1][1])) <= 1e-12);
  CHECK(std::abs(std::stod(rows[1][2])) <= 1e-12);
  CHECK(rows[1][8] == "0");
}

TEST_CASE("letsplay: dominated subgame is flagged and A gains") {
  Run r = Invoke({"letsplay", "--pool", Data("pool_mixed.json"),
                  "--b-members", "uniform,pure-1", "--mc", "50000", "--seed",
                  "3"});
  REQUIRE(r.code == 0);
  auto rows = CsvRows(r.out);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) > 0.0);
    CHECK(std::stod(rows[i][1]) == -std::stod(rows[i][2]));
    CHECK(rows[i][8] == "1");
    CHECK(rows[i][9] == "1");
    CHECK(std::stod(rows[i][7]) <= 5.0);
  }
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("letsplay: seeded pools, JSON output and member checks") {
  std::vector<std::string> args = {"letsplay", "--seed", "7", "--exact",
                                   "--format", "json"};
  Run r = Invoke(args);
  REQUIRE(r.code == 0);
  CHECK(Invoke(args).out == r.out);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["metadata"]["config"]["seed"] == "7");
  CHECK(j["subgames"].size() == 5);
  for (const auto& row : j["rows"]) {
    CHECK(row["exact_a"].get<double>() >= -1e-7);
  }
  CHECK(Invoke({"letsplay", "--exact"}).code == kExitUsage);
  CHECK(Invoke({"letsplay", "--seed", "1", "--b-members", "lp-nash"}).code ==
        kExitUsage);
  CHECK(Invoke({"letsplay", "--seed", "1", "--b-members", "oracle"}).code ==
        kExitUsage);
}

TEST_CASE("reduce: one-node fixture") {
  fs::path tree = TempDir() / "one_node_tree.json";
  Run r = Invoke({"reduce", Data("one_node.json"), "--out", tree.string()});
  REQUIRE(r.code == 0);
  auto kv = KeyValues(r.out);
  CHECK(kv.at("decision_nodes") == "1");
  CHECK(kv.at("chance_nodes") == "0");
  CHECK(kv.at("leaf_nodes") == "3");
  CHECK(kv.at("one_plus_prod_domain_sizes") == "10");
  auto j = nlohmann::json::parse(Slurp(tree));
  CHECK(j["nodes"].size() == 4);
  CHECK(j.contains("metadata"));
}

TEST_CASE("reduce: emitted two-player game verifies against inference") {
  fs::path sbn = TempDir() / "two_player_n2.json";
  REQUIRE(Invoke({"asymmetry", "--point-mass-n", "2", "--emit-sbn",
                  sbn.string()})
              .code == 0);
  Run r = Invoke({"reduce", sbn.string(), "--verify"});
  REQUIRE(r.code == 0);
  auto kv = KeyValues(r.out);
  CHECK(std::stod(kv.at("max_abs_diff_vs_inference")) <= 1e-9);
  CHECK(kv.at("recurrence_matches") == "true");
}

TEST_CASE("reduce: malformed input reports its position") {
  Run r = Invoke({"reduce", Data("malformed.json")});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 4") != std::string::npos);
  CHECK(Invoke({"reduce", Data("missing.json")}).code == kExitUsage);
}

TEST_CASE("solve-zs: RPS and skew check") {
  Run r = Invoke({"solve-zs", Data("rps.json"), "--symmetric"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["value"].get<double>()) <= 1e-9);
  for (const auto& p : j["strategy"]) {
    CHECK(p.get<double>() == doctest::Approx(1.0 / 3));
  }
  r = Invoke({"solve-zs", Data("not_skew.json"), "--symmetric"});
  CHECK(r.code == kExitUsage);
  CHECK(Invoke({"solve-zs", Data("not_skew.json")}).code == kExitOk);
  r = Invoke({"solve-zs", Data("rps.json"), "--format", "csv"});
  CHECK(KeyValues(r.out).count("value") == 1);
}

TEST_CASE("CSV and number formatting helpers") {
  CHECK(CsvField("plain") == "plain");
  CHECK(CsvField("a,b") == "\"a,b\"");
  CHECK(CsvField("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(CsvField("two\nlines") == "\"two\nlines\"");
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(-0.0) == "0");
  CHECK(FormatDouble(1e-20) == "1e-20");
  CHECK(std::stod(FormatDouble(1.0 / 3)) == 1.0 / 3);
}

}  // namespace
}  // namespace sbn
