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

#include "sbn/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbn/bound_network.h"
#include "sbn/error.h"
#include "sbn/games.h"
#include "sbn/inference.h"
#include "sbn/reduction.h"
#include "sbn/rng.h"
#include "sbn/serialization.h"
#include "sbn/solver.h"

namespace sbn {

using Json = nlohmann::ordered_json;

std::string FormatDouble(double x) {
  if (x == 0.0) x = 0.0;  // no "-0" in tables
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw InternalError("cannot format number");
  return std::string(buf, ptr);
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

// Ordered key/value record of everything that shapes an output file.
class Metadata {
 public:
  explicit Metadata(std::string command) : command_(std::move(command)) {}

  void Add(const std::string& key, const std::string& value) {
    items_.emplace_back(key, value);
  }
  void Add(const std::string& key, double value) {
    Add(key, FormatDouble(value));
  }
  void Add(const std::string& key, long long value) {
    Add(key, std::to_string(value));
  }
  void Add(const std::string& key, bool value) {
    Add(key, std::string(value ? "true" : "false"));
  }

  std::string Csv() const {
    std::string out = "# tool: sbn " + std::string(kToolVersion) + "\n";
    out += "# command: " + command_ + "\n";
    for (const auto& [k, v] : items_) out += "# " + k + ": " + v + "\n";
    return out;
  }

  Json ToJson() const {
    Json j;
    j["tool"] = "sbn " + std::string(kToolVersion);
    j["command"] = command_;
    Json config = Json::object();
    for (const auto& [k, v] : items_) config[k] = v;
    j["config"] = std::move(config);
    return j;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> items_;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header)
      : header_(std::move(header)) {}

  void AddRow(std::vector<std::string> row) {
    row.resize(header_.size());
    rows_.push_back(std::move(row));
  }

  std::string ToString() const {
    std::string out = Line(header_);
    for (const auto& row : rows_) out += Line(row);
    return out;
  }

 private:
  static std::string Line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += CsvField(fields[i]);
    }
    return out + "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct OutputArgs {
  std::string out = "-";
  std::string format;
  std::string emit_sbn;
};

void AddOutputOptions(CLI::App* cmd, OutputArgs& o, const std::string& format) {
  o.format = format;
  cmd->add_option("--out", o.out, "Output path ('-' for stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void Write(const std::string& path, const std::string& text,
           std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ContractError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ContractError("failed writing '" + path + "'");
}

void EmitSbn(const OutputArgs& o, const SbnGraph& graph, std::ostream& out) {
  if (o.emit_sbn.empty()) return;
  Write(o.emit_sbn, SerializeSbn(graph), out);
}

std::string Render(const OutputArgs& o, const Metadata& meta,
                   const CsvTable& table, Json body) {
  if (o.format == "json") {
    Json j;
    j["metadata"] = meta.ToJson();
    for (auto& [k, v] : body.items()) j[k] = v;
    return j.dump(2) + "\n";
  }
  return meta.Csv() + table.ToString();
}

// Length-distribution flags shared by nocount and asymmetry.
struct LengthArgs {
  double lambda = 1.0;
  double tail_tol = 1e-6;
  int n_max_cap = kDefaultNMaxCap;
  bool clamp = false;
  int point_mass_n = 0;
  int g_max = -1;

  void Register(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "Exponential rate of the length")
        ->capture_default_str();
    cmd->add_option("--tail-tol", tail_tol, "Tail mass allowed beyond n_max")
        ->capture_default_str();
    cmd->add_option("--n-max-cap", n_max_cap, "Largest admissible n_max")
        ->capture_default_str();
    cmd->add_flag("--clamp", clamp,
                  "Truncate at the cap instead of failing when it binds");
    cmd->add_option("--point-mass-n", point_mass_n,
                    "Fixture: fix the length at this value");
    cmd->add_option("--g-max", g_max, "Largest constant guess (default n_max)");
  }

  TruncatedExponential Length() const {
    if (point_mass_n > 0) return TruncatedExponential::PointMass(point_mass_n);
    return TruncatedExponential::Make(lambda, {tail_tol, n_max_cap, clamp});
  }

  void Describe(Metadata& meta) const {
    if (point_mass_n > 0) {
      meta.Add("point_mass_n", static_cast<long long>(point_mass_n));
    } else {
      meta.Add("lambda", lambda);
      meta.Add("tail_tol", tail_tol);
      meta.Add("n_max_cap", static_cast<long long>(n_max_cap));
      meta.Add("clamp", clamp);
    }
    meta.Add("g_max", static_cast<long long>(g_max));
  }
};

// --- nocount -----------------------------------------------------------------

struct NoCountArgs {
  LengthArgs length;
  OutputArgs output;
};

void RunNoCount(const NoCountArgs& args, std::ostream& out) {
  TruncatedExponential length = args.length.Length();
  ConstantGuessTable guess = BestConstantGuess(length, args.length.g_max);
  Metadata meta("nocount");
  args.length.Describe(meta);
  meta.Add("seed", std::string("none"));

  const bool has_conjecture = args.length.point_mass_n == 0;
  const long long conjecture =
      has_conjecture ? std::lround(1.0 / (2.0 * length.lambda)) : -1;

  CsvTable table({"g", "win_prob"});
  Json rows = Json::array();
  for (std::size_t g = 0; g < guess.table.size(); ++g) {
    table.AddRow({std::to_string(g), FormatDouble(guess.table[g])});
    rows.push_back(Json{{"g", g}, {"win_prob", guess.table[g]}});
  }
  table.AddRow({"g_star", std::to_string(guess.g_star)});
  table.AddRow({"win_prob_star", FormatDouble(guess.win_prob)});
  table.AddRow({"conjecture", has_conjecture ? std::to_string(conjecture) : ""});
  table.AddRow({"conjecture_matches",
                has_conjecture ? (conjecture == guess.g_star ? "true" : "false")
                               : ""});
  table.AddRow({"n_max", std::to_string(length.n_max)});
  table.AddRow({"tail_mass", FormatDouble(length.tail_mass)});

  Json body;
  body["table"] = std::move(rows);
  body["g_star"] = guess.g_star;
  body["win_prob_star"] = guess.win_prob;
  if (has_conjecture) {
    body["conjecture"] = conjecture;
    body["conjecture_matches"] = conjecture == guess.g_star;
  } else {
    body["conjecture"] = nullptr;
    body["conjecture_matches"] = nullptr;
  }
  body["n_max"] = length.n_max;
  body["tail_mass"] = length.tail_mass;
  Write(args.output.out, Render(args.output, meta, table, std::move(body)),
        out);
  if (!args.output.emit_sbn.empty()) {
    EmitSbn(args.output, *MakeNoCount(length, args.length.g_max).graph, out);
  }
}

// --- asymmetry ---------------------------------------------------------------

struct AsymmetryArgs {
  LengthArgs length;
  OutputArgs output;
  std::size_t mc = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int workers = 1;
};

std::string ActionLabel(const SbnGraph& graph, const PureStrategyLabel& l) {
  std::string out;
  for (const auto& [id, a] : l) {
    if (!out.empty()) out += ';';
    out += graph.node(id).family.strategies[a].label;
  }
  return out;
}

void RunAsymmetry(const AsymmetryArgs& args, std::ostream& out) {
  if (args.mc > 0 && !args.has_seed) {
    throw ContractError("--mc needs an explicit --seed");
  }
  TruncatedExponential length = args.length.Length();
  GameBundle bundle = MakeTwoPlayerNoCount(length, args.length.g_max);
  const SbnGraph& graph = *bundle.graph;
  ConstantGuessTable guess = BestConstantGuess(length, args.length.g_max);
  const std::size_t max_support = MaxSupportFromEnv();
  NormalFormGame game = InducedNormalForm(bundle.graph, max_support,
                                          args.workers);

  const std::size_t g_star = guess.g_star;
  const std::size_t counter =
      *graph.node("y").family.IndexOf(kCounter);
  const std::size_t nx = game.shape()[0];
  const std::size_t ny = game.shape()[1];

  Metadata meta("asymmetry");
  args.length.Describe(meta);
  meta.Add("n_max", static_cast<long long>(length.n_max));
  meta.Add("tail_mass", length.tail_mass);
  meta.Add("max_support", static_cast<long long>(max_support));
  meta.Add("mc", static_cast<long long>(args.mc));
  meta.Add("seed", args.has_seed ? std::to_string(args.seed) : "none");

  CsvTable table({"row", "x_strategy", "y_strategy", "payoff_x", "payoff_y",
                  "gap", "se_x", "se_y"});
  Json rows = Json::array();
  auto add = [&](const std::string& name, std::size_t i, std::size_t j,
                 double px, double py, std::string se_x = "",
                 std::string se_y = "") {
    std::string xs = ActionLabel(graph, game.pure_strategies()[0][i]);
    std::string ys = ActionLabel(graph, game.pure_strategies()[1][j]);
    table.AddRow({name, xs, ys, FormatDouble(px), FormatDouble(py),
                  FormatDouble(py - px), se_x, se_y});
    Json r{{"row", name}, {"x_strategy", xs}, {"y_strategy", ys},
           {"payoff_x", px}, {"payoff_y", py}, {"gap", py - px}};
    if (!se_x.empty()) {
      r["se_x"] = std::stod(se_x);
      r["se_y"] = std::stod(se_y);
    }
    rows.push_back(std::move(r));
  };

  std::size_t ref[2] = {g_star, counter};
  const auto& ref_pay = game.payoff(ref);
  add("reference", g_star, counter, ref_pay[0], ref_pay[1]);

  // Each player's best reply to the other's reference strategy.
  auto x_pure = [&](std::size_t i) {
    MixedStrategy s(nx, 0.0);
    s[i] = 1.0;
    return s;
  };
  auto y_pure = [&](std::size_t j) {
    MixedStrategy s(ny, 0.0);
    s[j] = 1.0;
    return s;
  };
  BestResponseResult bx = BestResponse(game, 0, {{}, y_pure(counter)});
  std::size_t jx[2] = {bx.indices[0], counter};
  add("x_best_response", bx.indices[0], counter, game.payoff(jx)[0],
      game.payoff(jx)[1]);
  BestResponseResult by = BestResponse(game, 1, {x_pure(g_star), {}});
  std::size_t jy[2] = {g_star, by.indices[0]};
  add("y_best_response", g_star, by.indices[0], game.payoff(jy)[0],
      game.payoff(jy)[1]);

  if (args.mc > 0) {
    BoundNetwork bound = Bind(bundle.graph, ProfileOf(game, ref));
    PayoffEstimate est =
        MonteCarloExpectedPayoffs(bound, args.mc, args.seed, args.workers);
    add("reference_mc", g_star, counter, est.mean[0], est.mean[1],
        FormatDouble(est.std_error[0]), FormatDouble(est.std_error[1]));
  }

  Json body;
  body["g_star"] = guess.g_star;
  body["win_prob_star"] = guess.win_prob;
  body["rows"] = std::move(rows);
  if (args.output.format == "json") {
    Json matrix = Json::array();
    for (std::size_t i = 0; i < nx; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < ny; ++j) {
        std::size_t ij[2] = {i, j};
        row.push_back(game.payoff(ij));
      }
      matrix.push_back(std::move(row));
    }
    Json xl = Json::array(), yl = Json::array();
    for (const auto& l : game.pure_strategies()[0]) {
      xl.push_back(ActionLabel(graph, l));
    }
    for (const auto& l : game.pure_strategies()[1]) {
      yl.push_back(ActionLabel(graph, l));
    }
    body["x_strategies"] = std::move(xl);
    body["y_strategies"] = std::move(yl);
    body["bimatrix"] = std::move(matrix);
  }
  Write(args.output.out, Render(args.output, meta, table, std::move(body)),
        out);
  EmitSbn(args.output, graph, out);
}

// --- letsplay ----------------------------------------------------------------

struct LetsPlayArgs {
  OutputArgs output;
  int pool_size = 5;
  int n_min = 2;
  int n_max = 6;
  int decimals = 2;
  std::uint64_t seed = 0;
  std::string b_members;
  std::string pool_file;
  std::size_t mc = 100000;
  bool exact_only = false;
  int workers = 1;
};

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

struct Pool {
  std::vector<SkewSymmetricGame> subgames;
  std::vector<double> weights;
};

Pool LoadPool(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid pool JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("subgames") || !j["subgames"].is_array()) {
    throw ParseError("pool must be an object with a 'subgames' array");
  }
  Pool pool;
  for (const auto& m : j["subgames"]) {
    pool.subgames.push_back(
        SkewSymmetricGame::FromMatrix(ParseMatrixJson(m.dump())));
  }
  if (j.contains("weights")) {
    pool.weights = j["weights"].get<std::vector<double>>();
  } else {
    pool.weights.assign(pool.subgames.size(),
                        1.0 / static_cast<double>(pool.subgames.size()));
  }
  return pool;
}

// Subgame k uses stream StreamSeed(seed, k): its size first, then the seed
// handed to GenSkewSymmetric.
Pool GeneratePool(int pool_size, int n_min, int n_max, int decimals,
                  std::uint64_t seed) {
  if (pool_size < 1) throw ContractError("pool size must be >= 1");
  if (n_min < 1 || n_max < n_min) {
    throw ContractError("subgame sizes need 1 <= n_min <= n_max");
  }
  Pool pool;
  for (int k = 0; k < pool_size; ++k) {
    SplitMix64 rng(SplitMix64::StreamSeed(seed, k));
    int n = static_cast<int>(rng.UniformInt(n_min, n_max));
    pool.subgames.push_back(GenSkewSymmetric(n, decimals, rng.Next()));
  }
  pool.weights.assign(pool_size, 1.0 / static_cast<double>(pool_size));
  return pool;
}

void RunLetsPlay(const LetsPlayArgs& args, bool has_seed, std::ostream& out) {
  Pool pool;
  if (!args.pool_file.empty()) {
    pool = LoadPool(args.pool_file);
  } else {
    if (!has_seed) throw ContractError("letsplay needs an explicit --seed");
    pool = GeneratePool(args.pool_size, args.n_min, args.n_max, args.decimals,
                        args.seed);
  }
  if (!args.exact_only && args.mc > 0 && !has_seed) {
    throw ContractError("Monte Carlo columns need an explicit --seed");
  }
  int largest = 1;
  for (const auto& g : pool.subgames) largest = std::max(largest, g.n);
  std::vector<std::string> b_members = SplitList(args.b_members);
  if (b_members.empty()) {
    b_members = {"uniform", "br-to-uniform"};
    for (int k = 0; k < largest; ++k) {
      b_members.push_back("pure-" + std::to_string(k));
    }
  }
  GameBundle bundle = MakeLetsPlay(pool.subgames, pool.weights, {kLpNash},
                                   b_members);
  const std::size_t max_support = MaxSupportFromEnv();
  const bool run_mc = !args.exact_only && args.mc > 0;

  Metadata meta("letsplay");
  if (!args.pool_file.empty()) {
    meta.Add("pool", args.pool_file);
  } else {
    meta.Add("pool_size", static_cast<long long>(args.pool_size));
    meta.Add("n_min", static_cast<long long>(args.n_min));
    meta.Add("n_max", static_cast<long long>(args.n_max));
    meta.Add("decimals", static_cast<long long>(args.decimals));
  }
  std::string members;
  for (const auto& m : b_members) members += (members.empty() ? "" : ",") + m;
  meta.Add("b_members", members);
  meta.Add("mc", static_cast<long long>(run_mc ? args.mc : 0));
  meta.Add("seed", has_seed ? std::to_string(args.seed) : "none");

  CsvTable table({"b_member", "exact_a", "exact_b", "mc_a", "mc_b", "mc_se_a",
                  "mc_se_b", "mc_max_z", "flagged_subgames", "flagged_ids"});
  Json rows = Json::array();
  for (std::size_t b = 0; b < b_members.size(); ++b) {
    StrategyProfile profile;
    profile.choices["S_a"] = 0;
    profile.choices["S_b"] = b;
    BoundNetwork bound = Bind(bundle.graph, profile);
    std::vector<double> exact = ExactExpectedPayoffs(bound, max_support);

    std::vector<std::size_t> flagged;
    for (std::size_t k = 0; k < pool.subgames.size(); ++k) {
      if (pool.weights[k] <= 0.0) continue;
      MixedStrategy q = MemberStrategy(b_members[b], pool.subgames[k]);
      if (ResponseGap(pool.subgames[k], q) > kResponseGapTolerance) {
        flagged.push_back(k);
      }
    }
    std::string ids;
    for (std::size_t k : flagged) {
      ids += (ids.empty() ? "" : ";") + std::to_string(k);
    }

    std::vector<std::string> row = {b_members[b], FormatDouble(exact[0]),
                                    FormatDouble(exact[1])};
    Json r{{"b_member", b_members[b]},
           {"exact_a", exact[0]},
           {"exact_b", exact[1]}};
    if (run_mc) {
      PayoffEstimate est =
          MonteCarloExpectedPayoffs(bound, args.mc, args.seed, args.workers);
      double z = 0.0;
      for (int p = 0; p < 2; ++p) {
        double diff = std::abs(est.mean[p] - exact[p]);
        if (est.std_error[p] > 0.0) {
          z = std::max(z, diff / est.std_error[p]);
        } else if (diff > 0.0) {
          z = std::numeric_limits<double>::infinity();
        }
      }
      row.insert(row.end(),
                 {FormatDouble(est.mean[0]), FormatDouble(est.mean[1]),
                  FormatDouble(est.std_error[0]), FormatDouble(est.std_error[1]),
                  FormatDouble(z)});
      r["mc_a"] = est.mean[0];
      r["mc_b"] = est.mean[1];
      r["mc_se_a"] = est.std_error[0];
      r["mc_se_b"] = est.std_error[1];
      r["mc_max_z"] = z;
    } else {
      row.insert(row.end(), {"", "", "", "", ""});
    }
    row.push_back(std::to_string(flagged.size()));
    row.push_back(ids);
    r["flagged_subgames"] = flagged.size();
    r["flagged_ids"] = flagged;
    table.AddRow(std::move(row));
    rows.push_back(std::move(r));
  }

  Json body;
  body["rows"] = std::move(rows);
  if (args.output.format == "json") {
    Json subgames = Json::array();
    for (const auto& g : pool.subgames) {
      Json m = Json::array();
      for (const auto& row : g.entries) {
        Json r = Json::array();
        for (const FixedPoint& v : row) r.push_back(v.ToString());
        m.push_back(std::move(r));
      }
      subgames.push_back(std::move(m));
    }
    body["subgames"] = std::move(subgames);
    body["weights"] = pool.weights;
  }
  Write(args.output.out, Render(args.output, meta, table, std::move(body)),
        out);
  EmitSbn(args.output, *bundle.graph, out);
}

// --- reduce ------------------------------------------------------------------

struct ReduceArgs {
  std::string input;
  std::string out;
  std::string tier_order;
  bool verify = false;
  std::size_t max_nodes = kDefaultMaxTreeNodes;
};

void RunReduce(const ReduceArgs& args, std::ostream& out) {
  auto graph = std::make_shared<const SbnGraph>(LoadSbnFile(args.input));
  ValidationReport report = Validate(*graph);
  if (!report.ok()) {
    throw ContractError("invalid SBN '" + args.input + "':\n" +
                        report.ToString());
  }
  std::vector<NodeId> tiers = SplitList(args.tier_order);
  if (tiers.empty()) tiers = graph->StrategicIds();
  ExtensiveTree tree = ToExtensiveForm(graph, tiers, args.max_nodes);
  TreeCounts counts = CountTreeNodes(tree);
  std::optional<TreeCounts> predicted = PredictTreeCounts(graph, tiers);

  Metadata meta("reduce");
  meta.Add("input", args.input);
  std::string order;
  for (const auto& t : tiers) order += (order.empty() ? "" : ",") + t;
  meta.Add("tier_order", order);

  CsvTable table({"quantity", "value"});
  const std::size_t total = counts.decision + counts.chance + counts.leaf;
  table.AddRow({"decision_nodes", std::to_string(counts.decision)});
  table.AddRow({"chance_nodes", std::to_string(counts.chance)});
  table.AddRow({"leaf_nodes", std::to_string(counts.leaf)});
  table.AddRow({"total_nodes", std::to_string(total)});
  table.AddRow({"information_sets", std::to_string(tree.info_sets.size())});
  table.AddRow({"one_plus_prod_domain_sizes",
                FormatDouble(ClaimedNodeCount(*graph))});
  table.AddRow({"recurrence_matches",
                predicted ? (*predicted == counts ? "true" : "false")
                          : "n/a"});
  int status = kExitOk;
  if (args.verify) {
    double worst = 0.0;
    const std::size_t cap = MaxSupportFromEnv();
    for (const StrategyProfile& p : EnumerateProfiles(*graph)) {
      auto direct = ExactExpectedPayoffs(Bind(graph, p), cap);
      auto walked = TreeExpectedPayoffs(tree, p);
      for (std::size_t k = 0; k < direct.size(); ++k) {
        worst = std::max(worst, std::abs(direct[k] - walked[k]));
      }
    }
    table.AddRow({"max_abs_diff_vs_inference", FormatDouble(worst)});
    if (worst > 1e-9) status = kExitInternal;
  }
  out << meta.Csv() << table.ToString();
  if (!args.out.empty()) {
    Json j = TreeToJson(*graph, tree);
    j["metadata"] = meta.ToJson();
    Write(args.out, j.dump(2) + "\n", out);
  }
  if (status != kExitOk) {
    throw InternalError("tree evaluation disagrees with inference");
  }
}

// --- solve-zs ----------------------------------------------------------------

struct SolveArgs {
  std::string input;
  OutputArgs output;
  bool symmetric = false;
};

void RunSolve(const SolveArgs& args, std::ostream& out) {
  std::ifstream in(args.input, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + args.input + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Matrix a = ParseMatrixJson(buf.str());
  ZeroSumSolution s = ZeroSumSolve(a);
  if (args.symmetric) s.strategy = SymmetricNashSkew(a);

  Metadata meta("solve-zs");
  meta.Add("input", args.input);
  meta.Add("symmetric", args.symmetric);
  CsvTable table({"item", "index", "value"});
  table.AddRow({"value", "", FormatDouble(s.value)});
  table.AddRow({"column_value", "", FormatDouble(s.column_value)});
  table.AddRow({"duality_gap", "", FormatDouble(s.duality_gap)});
  for (std::size_t i = 0; i < s.strategy.size(); ++i) {
    table.AddRow({"strategy", std::to_string(i), FormatDouble(s.strategy[i])});
  }
  for (std::size_t j = 0; j < s.certificate.size(); ++j) {
    table.AddRow(
        {"certificate", std::to_string(j), FormatDouble(s.certificate[j])});
  }
  Write(args.output.out,
        Render(args.output, meta, table, SolutionToJson(s)), out);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Strategic Bayesian network experiments", "sbn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("sbn ") + kToolVersion);

  NoCountArgs nocount;
  auto* c_nocount =
      app.add_subcommand("nocount", "Win probability of every constant guess");
  nocount.length.Register(c_nocount);
  AddOutputOptions(c_nocount, nocount.output, "csv");
  c_nocount->add_option("--emit-sbn", nocount.output.emit_sbn,
                        "Also write the game as SBN JSON");

  AsymmetryArgs asym;
  auto* c_asym = app.add_subcommand(
      "asymmetry", "Two-player NoCount: constant guesser vs counter");
  asym.length.Register(c_asym);
  AddOutputOptions(c_asym, asym.output, "csv");
  c_asym->add_option("--emit-sbn", asym.output.emit_sbn,
                     "Also write the game as SBN JSON");
  c_asym->add_option("--mc", asym.mc, "Monte Carlo samples for the reference");
  auto* asym_seed = c_asym->add_option("--seed", asym.seed, "RNG seed");
  c_asym->add_option("--workers", asym.workers, "Threads (0 = all cores)");

  LetsPlayArgs lets;
  auto* c_lets = app.add_subcommand(
      "letsplay", "LetsPlay: lp-nash against cheaper B strategies");
  AddOutputOptions(c_lets, lets.output, "csv");
  c_lets->add_option("--emit-sbn", lets.output.emit_sbn,
                     "Also write the game as SBN JSON");
  c_lets->add_option("--pool-size", lets.pool_size, "Subgames in the pool")
      ->capture_default_str();
  c_lets->add_option("--n-min", lets.n_min, "Smallest subgame size")
      ->capture_default_str();
  c_lets->add_option("--n-max", lets.n_max, "Largest subgame size")
      ->capture_default_str();
  c_lets->add_option("--decimals", lets.decimals, "Decimal places of entries")
      ->capture_default_str();
  auto* lets_seed = c_lets->add_option("--seed", lets.seed, "RNG seed");
  c_lets->add_option("--b-members", lets.b_members,
                     "Comma-separated B family (default: all builtin)");
  c_lets->add_option("--pool", lets.pool_file,
                     "Fixture: JSON {\"subgames\": [...], \"weights\": [...]}");
  auto* lets_mc =
      c_lets->add_option("--mc", lets.mc, "Monte Carlo samples per member")
          ->capture_default_str();
  c_lets->add_flag("--exact", lets.exact_only, "Skip Monte Carlo")
      ->excludes(lets_mc);
  c_lets->add_option("--workers", lets.workers, "Threads (0 = all cores)");

  ReduceArgs reduce;
  auto* c_reduce =
      app.add_subcommand("reduce", "Extensive form of an SBN JSON file");
  c_reduce->add_option("sbn_file", reduce.input, "SBN JSON file")->required();
  c_reduce->add_option("--out", reduce.out, "Write the tree JSON here");
  c_reduce->add_option("--tier-order", reduce.tier_order,
                       "Comma-separated strategic node ids");
  c_reduce->add_flag("--verify", reduce.verify,
                     "Check tree evaluation against inference per profile");
  c_reduce->add_option("--max-nodes", reduce.max_nodes, "Tree size limit")
      ->capture_default_str();

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve-zs", "Solve a zero-sum matrix");
  c_solve->add_option("matrix_file", solve.input, "JSON array of rows")
      ->required();
  AddOutputOptions(c_solve, solve.output, "json");
  c_solve->add_flag("--symmetric", solve.symmetric,
                    "Require A = -A^T and return the symmetric strategy");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_nocount->parsed()) {
      RunNoCount(nocount, out);
    } else if (c_asym->parsed()) {
      asym.has_seed = asym_seed->count() > 0;
      RunAsymmetry(asym, out);
    } else if (c_lets->parsed()) {
      RunLetsPlay(lets, lets_seed->count() > 0, out);
    } else if (c_reduce->parsed()) {
      RunReduce(reduce, out);
    } else if (c_solve->parsed()) {
      RunSolve(solve, out);
    }
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace sbn
