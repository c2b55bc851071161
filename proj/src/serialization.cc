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

#include "sbn/serialization.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sbn/error.h"

namespace sbn {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

void CheckFields(const Json& obj, const std::string& path,
                 std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional) {
  if (!obj.is_object()) Fail(path, "expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!obj.contains(k)) Fail(path, std::string("missing field '") + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, _] : obj.items()) {
    if (allowed.count(key) == 0) Fail(path, "unknown field '" + key + "'");
  }
}

const Json& ArrayField(const Json& obj, const char* key,
                       const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_array()) Fail(path + "." + key, "expected an array");
  return v;
}

std::string StringField(const Json& obj, const char* key,
                        const std::string& path) {
  const Json& v = obj.at(key);
  if (!v.is_string()) Fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

FixedPoint ParseFixed(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) {
      return FixedPoint(j.get<std::int64_t>(), 0);
    }
    if (j.is_number_unsigned()) {
      return FixedPoint(static_cast<std::int64_t>(j.get<std::uint64_t>()), 0);
    }
    if (j.is_number_float()) return FixedPoint::FromDouble(j.get<double>());
    if (j.is_string()) return FixedPoint::Parse(j.get<std::string>());
  } catch (const Error& e) {
    Fail(path, e.what());
  }
  Fail(path, "expected a number");
}

Value ParseValue(const Json& j, bool payoff, const std::string& path) {
  if (payoff) {
    if (!j.is_array()) Fail(path, "payoff values must be arrays of numbers");
    PayoffVector tuple;
    for (std::size_t i = 0; i < j.size(); ++i) {
      tuple.push_back(ParseFixed(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return tuple;
  }
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number_unsigned()) {
    return Value(static_cast<std::int64_t>(j.get<std::uint64_t>()));
  }
  if (j.is_string()) return Value(j.get<std::string>());
  Fail(path, "values must be integers or strings");
}

struct Probability {
  double value;
  Rational exact;
};

// Exact values are only formed in rational mode; in float mode a number
// needs no exact decimal expansion.
Probability ParseProbability(const Json& j, bool exact,
                             const std::string& path) {
  try {
    if (j.is_number()) {
      double v = j.get<double>();
      return {v, exact ? Rational::FromDouble(v) : Rational()};
    }
    if (j.is_string()) {
      Rational r = Rational::Parse(j.get<std::string>());
      return {r.ToDouble(), r};
    }
  } catch (const Error& e) {
    Fail(path, e.what());
  }
  Fail(path, "probabilities must be numbers or \"p/q\" strings");
}

Cpd ParseCpd(const Json& rows, const std::vector<NodeId>& parents,
             ProbabilityMode mode, const std::string& path) {
  if (!rows.is_array()) Fail(path, "cpd must be an array of rows");
  std::vector<Cpd::Row> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string rpath = path + "[" + std::to_string(r) + "]";
    CheckFields(rows[r], rpath, {"given", "p"}, {});
    const Json& given = ArrayField(rows[r], "given", rpath);
    const Json& p = ArrayField(rows[r], "p", rpath);
    Cpd::Row row;
    for (std::size_t k = 0; k < given.size(); ++k) {
      row.given.push_back(ParseValue(
          given[k], false, rpath + ".given[" + std::to_string(k) + "]"));
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      Probability prob =
          ParseProbability(p[k], mode == ProbabilityMode::kRational,
                           rpath + ".p[" + std::to_string(k) + "]");
      row.probs.push_back(prob.value);
      if (mode == ProbabilityMode::kRational) row.exact.push_back(prob.exact);
    }
    out.push_back(std::move(row));
  }
  return Cpd::Table(parents, std::move(out));
}

}  // namespace

std::pair<int, int> LineColumn(std::string_view text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

SbnGraph ParseSbnJson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    auto [line, column] = LineColumn(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte),
                     line, column);
  }
  CheckFields(doc, "$", {"players", "nodes"}, {"probability"});
  if (!doc["players"].is_number_integer()) {
    Fail("$.players", "expected an integer");
  }
  ProbabilityMode mode = ProbabilityMode::kFloat;
  if (doc.contains("probability")) {
    std::string m = StringField(doc, "probability", "$");
    if (m == "rational") {
      mode = ProbabilityMode::kRational;
    } else if (m != "float") {
      Fail("$.probability", "expected \"float\" or \"rational\"");
    }
  }
  SbnGraph graph(doc["players"].get<int>(), mode);
  const Json& nodes = ArrayField(doc, "nodes", "$");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Json& jn = nodes[i];
    std::string path = "$.nodes[" + std::to_string(i) + "]";
    if (!jn.is_object()) Fail(path, "expected an object");
    std::string kind = jn.contains("kind") ? StringField(jn, "kind", path) : "";
    Node node;
    if (kind == "chance") {
      CheckFields(jn, path, {"id", "kind", "domain", "parents", "cpd"}, {});
      node.kind = NodeKind::kChance;
    } else if (kind == "strategic") {
      CheckFields(jn, path,
                  {"id", "kind", "domain", "parents", "owner", "family"}, {});
      node.kind = NodeKind::kStrategic;
    } else if (kind == "payoff") {
      CheckFields(jn, path, {"id", "kind", "domain", "parents", "cpd"},
                  {"owner"});
      node.kind = NodeKind::kPayoff;
    } else {
      Fail(path + ".kind", "expected \"chance\", \"strategic\" or \"payoff\"");
    }
    node.id = StringField(jn, "id", path);
    const Json& domain = ArrayField(jn, "domain", path);
    std::vector<Value> values;
    for (std::size_t k = 0; k < domain.size(); ++k) {
      values.push_back(ParseValue(domain[k], node.kind == NodeKind::kPayoff,
                                  path + ".domain[" + std::to_string(k) + "]"));
    }
    node.domain = Domain(std::move(values));
    const Json& parents = ArrayField(jn, "parents", path);
    for (std::size_t k = 0; k < parents.size(); ++k) {
      if (!parents[k].is_string()) {
        Fail(path + ".parents[" + std::to_string(k) + "]", "expected an id");
      }
      node.parents.push_back(parents[k].get<std::string>());
    }
    if (jn.contains("owner")) {
      const Json& owner = jn["owner"];
      if (owner.is_number_integer()) {
        node.owner = owner.get<int>();
      } else if (owner.is_string() && owner.get<std::string>() == "all" &&
                 node.kind == NodeKind::kPayoff) {
        node.owner = kAllPlayers;
      } else {
        Fail(path + ".owner", "expected a player index");
      }
    }
    if (node.kind == NodeKind::kStrategic) {
      const Json& jf = jn["family"];
      std::string fpath = path + ".family";
      CheckFields(jf, fpath, {"name", "strategies"}, {"deterministic"});
      node.family.name = StringField(jf, "name", fpath);
      if (jf.contains("deterministic")) {
        if (!jf["deterministic"].is_boolean()) {
          Fail(fpath + ".deterministic", "expected a boolean");
        }
        node.family.deterministic = jf["deterministic"].get<bool>();
      }
      const Json& strategies = ArrayField(jf, "strategies", fpath);
      for (std::size_t s = 0; s < strategies.size(); ++s) {
        std::string spath = fpath + ".strategies[" + std::to_string(s) + "]";
        CheckFields(strategies[s], spath, {"label", "cpd"}, {});
        Strategy strategy;
        strategy.label = StringField(strategies[s], "label", spath);
        strategy.cpd =
            ParseCpd(strategies[s]["cpd"], node.parents, mode, spath + ".cpd");
        node.family.strategies.push_back(std::move(strategy));
      }
    } else {
      node.cpd = ParseCpd(jn["cpd"], node.parents, mode, path + ".cpd");
    }
    try {
      graph.AddNode(std::move(node));
    } catch (const StructuralError& e) {
      Fail(path, e.what());
    }
  }
  return graph;
}

SbnGraph LoadSbnFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseSbnJson(buf.str());
}

Json ValueToJson(const Value& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  Json arr = Json::array();
  for (const FixedPoint& f : std::get<PayoffVector>(value)) {
    if (f.decimals() == 0) {
      arr.push_back(f.units());
    } else if (FixedPoint::FromDouble(f.ToDouble()) == f) {
      arr.push_back(f.ToDouble());
    } else {
      arr.push_back(f.ToString());
    }
  }
  return arr;
}

std::vector<Cpd::Row> MaterializeRows(const SbnGraph& graph, const Node& node,
                                      const Cpd& cpd) {
  std::vector<const Node*> parents;
  std::vector<std::size_t> radix;
  std::size_t total = 1;
  for (const NodeId& p : cpd.parents()) {
    const Node& pn = graph.node(p);
    parents.push_back(&pn);
    radix.push_back(pn.domain.size());
    total *= pn.domain.size();
  }
  std::vector<Cpd::Row> rows(total);
  std::vector<char> filled(total, 0);
  auto fill_given = [&](std::size_t idx, Cpd::Row& row) {
    row.given.resize(parents.size());
    for (std::size_t k = parents.size(); k-- > 0;) {
      row.given[k] = parents[k]->domain[idx % radix[k]];
      idx /= radix[k];
    }
  };
  if (cpd.is_rule()) {
    std::vector<std::uint32_t> digits(parents.size(), 0);
    std::vector<Outcome> out;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (std::size_t k = parents.size(); k-- > 0;) {
        digits[k] = static_cast<std::uint32_t>(rest % radix[k]);
        rest /= radix[k];
      }
      out.clear();
      cpd.rule()(digits, out);
      Cpd::Row& row = rows[idx];
      fill_given(idx, row);
      row.probs.assign(node.domain.size(), 0.0);
      for (const Outcome& o : out) {
        if (o.index < row.probs.size()) row.probs[o.index] += o.prob;
      }
    }
    return rows;
  }
  std::vector<Cpd::Row> extra;
  for (const Cpd::Row& row : cpd.rows()) {
    std::size_t idx = 0;
    bool ok = row.given.size() == parents.size();
    for (std::size_t k = 0; ok && k < parents.size(); ++k) {
      auto vi = parents[k]->domain.IndexOf(row.given[k]);
      ok = vi.has_value();
      if (ok) idx = idx * radix[k] + *vi;
    }
    if (ok && !filled[idx]) {
      rows[idx] = row;
      filled[idx] = 1;
    } else {
      extra.push_back(row);
    }
  }
  std::vector<Cpd::Row> out;
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (filled[idx]) out.push_back(std::move(rows[idx]));
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

namespace {

Json ProbabilityJson(const Cpd::Row& row, std::size_t v, bool exact) {
  if (exact && v < row.exact.size()) return row.exact[v].ToString();
  return row.probs[v];
}

Json CpdToJson(const SbnGraph& graph, const Node& node, const Cpd& cpd,
               std::size_t& budget) {
  std::size_t total = node.domain.size();
  for (const NodeId& p : cpd.parents()) total *= graph.node(p).domain.size();
  if (total > budget) {
    throw CapacityError("serializing node '" + node.id +
                        "' would exceed the table size budget");
  }
  budget -= total;
  const bool exact = graph.mode() == ProbabilityMode::kRational;
  Json rows = Json::array();
  for (const Cpd::Row& row : MaterializeRows(graph, node, cpd)) {
    Json given = Json::array();
    for (const Value& v : row.given) given.push_back(ValueToJson(v));
    Json p = Json::array();
    for (std::size_t v = 0; v < row.probs.size(); ++v) {
      p.push_back(ProbabilityJson(row, v, exact));
    }
    Json jr;
    jr["given"] = std::move(given);
    jr["p"] = std::move(p);
    rows.push_back(std::move(jr));
  }
  return rows;
}

}  // namespace

Json ToJson(const SbnGraph& graph, std::size_t max_entries) {
  std::size_t budget = max_entries;
  Json doc;
  doc["players"] = graph.n_players();
  if (graph.mode() == ProbabilityMode::kRational) {
    doc["probability"] = "rational";
  }
  Json nodes = Json::array();
  for (const Node& node : graph.nodes()) {
    Json jn;
    jn["id"] = node.id;
    jn["kind"] = ToString(node.kind);
    Json domain = Json::array();
    for (const Value& v : node.domain.values()) domain.push_back(ValueToJson(v));
    jn["domain"] = std::move(domain);
    jn["parents"] = node.parents;
    switch (node.kind) {
      case NodeKind::kChance:
        jn["cpd"] = CpdToJson(graph, node, node.cpd, budget);
        break;
      case NodeKind::kPayoff:
        if (node.owner == kAllPlayers) {
          jn["owner"] = "all";
        } else {
          jn["owner"] = node.owner;
        }
        jn["cpd"] = CpdToJson(graph, node, node.cpd, budget);
        break;
      case NodeKind::kStrategic: {
        jn["owner"] = node.owner;
        Json family;
        family["name"] = node.family.name;
        if (node.family.deterministic) family["deterministic"] = true;
        Json strategies = Json::array();
        for (const Strategy& s : node.family.strategies) {
          Json js;
          js["label"] = s.label;
          js["cpd"] = CpdToJson(graph, node, s.cpd, budget);
          strategies.push_back(std::move(js));
        }
        family["strategies"] = std::move(strategies);
        jn["family"] = std::move(family);
        break;
      }
    }
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

std::string SerializeSbn(const SbnGraph& graph) {
  return ToJson(graph).dump(2) + "\n";
}

bool StructurallyEqual(const SbnGraph& a, const SbnGraph& b) {
  if (a.n_players() != b.n_players() || a.mode() != b.mode() ||
      a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node& x = a.nodes()[i];
    const Node& y = b.nodes()[i];
    if (x.id != y.id || x.kind != y.kind || !(x.domain == y.domain) ||
        x.parents != y.parents) {
      return false;
    }
    if (x.kind != NodeKind::kChance && x.owner != y.owner) return false;
    if (x.kind == NodeKind::kStrategic) {
      const auto& fx = x.family;
      const auto& fy = y.family;
      if (fx.name != fy.name || fx.deterministic != fy.deterministic ||
          fx.strategies.size() != fy.strategies.size()) {
        return false;
      }
      for (std::size_t s = 0; s < fx.strategies.size(); ++s) {
        if (fx.strategies[s].label != fy.strategies[s].label ||
            fx.strategies[s].cpd.parents() != fy.strategies[s].cpd.parents() ||
            MaterializeRows(a, x, fx.strategies[s].cpd) !=
                MaterializeRows(b, y, fy.strategies[s].cpd)) {
          return false;
        }
      }
    } else if (x.cpd.parents() != y.cpd.parents() ||
               MaterializeRows(a, x, x.cpd) != MaterializeRows(b, y, y.cpd)) {
      return false;
    }
  }
  return true;
}

}  // namespace sbn
