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

#include "sbn/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "sbn/error.h"

namespace sbn {

Cpd Cpd::Table(std::vector<NodeId> parents, std::vector<Row> rows) {
  Cpd cpd;
  cpd.parents_ = std::move(parents);
  cpd.rows_ = std::move(rows);
  return cpd;
}

Cpd Cpd::FromRule(std::vector<NodeId> parents, std::string name,
                  std::size_t max_support, Rule rule) {
  if (!rule) throw ContractError("empty CPD rule '" + name + "'");
  Cpd cpd;
  cpd.parents_ = std::move(parents);
  cpd.rule_name_ = std::move(name);
  cpd.rule_max_support_ = max_support;
  cpd.rule_ = std::move(rule);
  return cpd;
}

Cpd Cpd::Prior(std::vector<double> probs) {
  return Table({}, {Row{{}, std::move(probs), {}}});
}

Cpd Cpd::PointMass(std::size_t domain_size, std::size_t index) {
  return Prior(OneHot(domain_size, index));
}

std::optional<std::size_t> StrategyFamily::IndexOf(
    std::string_view label) const {
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (strategies[i].label == label) return i;
  }
  return std::nullopt;
}

const char* ToString(NodeKind kind) {
  switch (kind) {
    case NodeKind::kChance:
      return "chance";
    case NodeKind::kStrategic:
      return "strategic";
    case NodeKind::kPayoff:
      return "payoff";
  }
  return "?";
}

SbnGraph::SbnGraph(int n_players, ProbabilityMode mode)
    : n_players_(n_players), mode_(mode) {}

void SbnGraph::AddNode(Node node) {
  if (index_.count(node.id) > 0) {
    throw StructuralError("duplicate node id '" + node.id + "'");
  }
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
}

const Node* SbnGraph::Find(const NodeId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const Node& SbnGraph::node(const NodeId& id) const {
  const Node* n = Find(id);
  if (n == nullptr) throw StructuralError("unknown node '" + id + "'");
  return *n;
}

std::optional<std::size_t> SbnGraph::IndexOf(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> SbnGraph::StrategicIds() const {
  std::vector<NodeId> ids;
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::kStrategic) ids.push_back(n.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

const char* ToString(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCycle:
      return "cycle";
    case ViolationKind::kUnknownParent:
      return "unknown parent";
    case ViolationKind::kEmptyDomain:
      return "empty domain";
    case ViolationKind::kDuplicateValue:
      return "duplicate domain value";
    case ViolationKind::kValueKind:
      return "value kind";
    case ViolationKind::kIncompleteCpd:
      return "incomplete CPD";
    case ViolationKind::kDuplicateCpdRow:
      return "duplicate CPD row";
    case ViolationKind::kMalformedCpdRow:
      return "malformed CPD row";
    case ViolationKind::kNotNormalized:
      return "not normalized";
    case ViolationKind::kNegativeProbability:
      return "negative probability";
    case ViolationKind::kNotDeterministic:
      return "not deterministic";
    case ViolationKind::kParentMismatch:
      return "parent mismatch";
    case ViolationKind::kOwner:
      return "owner";
    case ViolationKind::kEmptyFamily:
      return "empty family";
    case ViolationKind::kDuplicateLabel:
      return "duplicate label";
    case ViolationKind::kPayoffStructure:
      return "payoff structure";
    case ViolationKind::kPayoffHasChildren:
      return "payoff has children";
    case ViolationKind::kRationalMode:
      return "rational mode";
  }
  return "?";
}

bool ValidationReport::Has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

bool ValidationReport::Has(ViolationKind kind, const NodeId& node) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) {
                       return v.kind == kind && v.node == node;
                     });
}

std::string ValidationReport::ToString() const {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << sbn::ToString(v.kind);
    if (!v.node.empty()) out << " [" << v.node << "]";
    out << ": " << v.message << "\n";
  }
  return out.str();
}

namespace {

// Kahn's algorithm with a smallest-id-first frontier. Parents that are not
// declared are ignored here (Validate reports them separately). On a cycle,
// returns the partial order and leaves the unordered nodes in `stuck`.
std::vector<std::size_t> KahnOrder(const SbnGraph& graph,
                                   std::vector<std::size_t>* stuck) {
  const auto& nodes = graph.nodes();
  std::vector<std::size_t> pending(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> children(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::set<std::size_t> unique_parents;
    for (const NodeId& p : nodes[i].parents) {
      if (auto pi = graph.IndexOf(p)) unique_parents.insert(*pi);
    }
    pending[i] = unique_parents.size();
    for (std::size_t p : unique_parents) children[p].push_back(i);
  }
  std::set<std::pair<NodeId, std::size_t>> frontier;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (pending[i] == 0) frontier.emplace(nodes[i].id, i);
  }
  std::vector<std::size_t> order;
  order.reserve(nodes.size());
  while (!frontier.empty()) {
    std::size_t i = frontier.begin()->second;
    frontier.erase(frontier.begin());
    order.push_back(i);
    for (std::size_t c : children[i]) {
      if (--pending[c] == 0) frontier.emplace(nodes[c].id, c);
    }
  }
  if (stuck != nullptr) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (pending[i] > 0) stuck->push_back(i);
    }
  }
  return order;
}

std::string DescribeAssignment(const std::vector<const Node*>& parents,
                               const std::vector<std::uint32_t>& digits) {
  std::string out = "{";
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (k > 0) out += ", ";
    out += parents[k]->id + "=" + ToString(parents[k]->domain[digits[k]]);
  }
  return out + "}";
}

// Advances a mixed-radix counter (last digit fastest). False on wrap-around.
bool NextAssignment(std::vector<std::uint32_t>& digits,
                    const std::vector<std::size_t>& radix) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < radix[k]) return true;
    digits[k] = 0;
  }
  return false;
}

class CpdChecker {
 public:
  CpdChecker(const Node& node, std::string where, ValidationReport& report)
      : node_(node), where_(std::move(where)), report_(report) {}

  void Add(ViolationKind kind, const std::string& message) {
    if (reported_.insert(kind).second) {
      report_.violations.push_back({kind, node_.id, where_ + message});
    }
  }

  void CheckRow(std::span<const Outcome> row, bool deterministic,
                const std::string& context) {
    double sum = 0.0;
    std::size_t ones = 0;
    std::size_t nonzero = 0;
    for (const Outcome& o : row) {
      if (o.index >= node_.domain.size()) {
        Add(ViolationKind::kMalformedCpdRow,
            "value index out of range at " + context);
        return;
      }
      if (!(o.prob >= 0.0)) {
        Add(ViolationKind::kNegativeProbability,
            "negative probability at " + context);
      }
      sum += o.prob;
      if (o.prob != 0.0) ++nonzero;
      if (o.prob == 1.0) ++ones;
    }
    if (!(std::abs(sum - 1.0) <= kNormalizationTolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row sums to " << sum << " at " << context;
      Add(ViolationKind::kNotNormalized, msg.str());
    }
    if (deterministic && !(ones == 1 && nonzero == 1)) {
      Add(ViolationKind::kNotDeterministic,
          "row is not a point mass at " + context);
    }
  }

 private:
  const Node& node_;
  std::string where_;
  ValidationReport& report_;
  std::set<ViolationKind> reported_;
};

}  // namespace

void ValidateCpd(const SbnGraph& graph, const Node& node, const Cpd& cpd,
                 bool require_deterministic, ValidationReport& report) {
  std::string where;
  if (node.kind == NodeKind::kStrategic) where = "family member: ";
  CpdChecker checker(node, where, report);
  if (cpd.parents() != node.parents) {
    checker.Add(ViolationKind::kParentMismatch,
                "CPD parent list differs from the node's parents");
    return;
  }
  std::vector<const Node*> parents;
  std::vector<std::size_t> radix;
  for (const NodeId& p : cpd.parents()) {
    const Node* pn = graph.Find(p);
    if (pn == nullptr || pn->domain.empty()) return;  // reported elsewhere
    parents.push_back(pn);
    radix.push_back(pn->domain.size());
  }
  constexpr std::size_t kMaxAssignments = std::size_t{1} << 32;
  std::size_t total = 1;
  for (std::size_t r : radix) {
    if (total > kMaxAssignments / r) {
      checker.Add(ViolationKind::kMalformedCpdRow,
                  "parent assignment space is too large to check");
      return;
    }
    total *= r;
  }

  if (cpd.is_rule()) {
    if (graph.mode() == ProbabilityMode::kRational) {
      checker.Add(ViolationKind::kRationalMode,
                  "rule-based CPD '" + cpd.rule_name() +
                      "' cannot carry exact probabilities");
      return;
    }
    std::vector<std::uint32_t> digits(radix.size(), 0);
    std::vector<Outcome> row;
    do {
      row.clear();
      cpd.rule()(digits, row);
      if (row.size() > cpd.rule_max_support()) {
        checker.Add(ViolationKind::kMalformedCpdRow,
                    "rule emits more entries than its declared support at " +
                        DescribeAssignment(parents, digits));
      }
      checker.CheckRow(row, require_deterministic,
                       DescribeAssignment(parents, digits));
    } while (NextAssignment(digits, radix));
    return;
  }

  std::vector<char> seen(total, 0);
  std::vector<Outcome> sparse;
  for (const Cpd::Row& row : cpd.rows()) {
    if (row.given.size() != parents.size()) {
      checker.Add(ViolationKind::kMalformedCpdRow,
                  "row lists " + std::to_string(row.given.size()) +
                      " parent values, expected " +
                      std::to_string(parents.size()));
      continue;
    }
    std::size_t idx = 0;
    bool known = true;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      auto vi = parents[k]->domain.IndexOf(row.given[k]);
      if (!vi) {
        checker.Add(ViolationKind::kMalformedCpdRow,
                    "value " + ToString(row.given[k]) +
                        " is not in the domain of parent '" + parents[k]->id +
                        "'");
        known = false;
        break;
      }
      idx = idx * radix[k] + *vi;
    }
    if (!known) continue;
    if (seen[idx]) {
      checker.Add(ViolationKind::kDuplicateCpdRow,
                  "parent assignment listed twice");
      continue;
    }
    seen[idx] = 1;
    if (row.probs.size() != node.domain.size()) {
      checker.Add(ViolationKind::kMalformedCpdRow,
                  "row has " + std::to_string(row.probs.size()) +
                      " probabilities for a domain of " +
                      std::to_string(node.domain.size()));
      continue;
    }
    std::string context = "row " + std::to_string(idx);
    sparse.clear();
    for (std::size_t v = 0; v < row.probs.size(); ++v) {
      sparse.push_back({static_cast<std::uint32_t>(v), row.probs[v]});
    }
    checker.CheckRow(sparse, require_deterministic, context);
    if (graph.mode() == ProbabilityMode::kRational) {
      if (row.exact.size() != row.probs.size()) {
        checker.Add(ViolationKind::kRationalMode,
                    "row lacks exact probabilities");
        continue;
      }
      Rational sum;
      for (const Rational& p : row.exact) {
        if (p < Rational(0)) {
          checker.Add(ViolationKind::kNegativeProbability,
                      "negative probability at " + context);
        }
        sum += p;
      }
      if (sum != Rational(1)) {
        checker.Add(ViolationKind::kNotNormalized,
                    "exact row sums to " + sum.ToString() + " at " + context);
      }
    }
  }
  std::size_t missing = std::count(seen.begin(), seen.end(), 0);
  if (missing > 0) {
    std::size_t first = std::find(seen.begin(), seen.end(), 0) - seen.begin();
    std::vector<std::uint32_t> digits(radix.size());
    for (std::size_t k = radix.size(); k-- > 0;) {
      digits[k] = static_cast<std::uint32_t>(first % radix[k]);
      first /= radix[k];
    }
    checker.Add(ViolationKind::kIncompleteCpd,
                std::to_string(missing) +
                    " parent assignment(s) have no row, first " +
                    DescribeAssignment(parents, digits));
  }
}

ValidationReport Validate(const SbnGraph& graph) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, const NodeId& node, std::string msg) {
    report.violations.push_back({kind, node, std::move(msg)});
  };
  if (graph.n_players() < 1) {
    add(ViolationKind::kOwner, "", "graph needs at least one player");
  }

  std::set<std::size_t> with_children;
  for (const Node& node : graph.nodes()) {
    if (node.domain.empty()) {
      add(ViolationKind::kEmptyDomain, node.id, "domain has no values");
    } else if (auto dup = node.domain.FirstDuplicate()) {
      add(ViolationKind::kDuplicateValue, node.id,
          "value " + ToString(*dup) + " appears more than once");
    }
    for (const Value& v : node.domain.values()) {
      bool payoff = IsPayoff(v);
      if (node.kind != NodeKind::kPayoff && payoff) {
        add(ViolationKind::kValueKind, node.id,
            "payoff tuple in a non-payoff domain");
        break;
      }
      if (node.kind == NodeKind::kPayoff) {
        std::size_t expected =
            node.owner == kAllPlayers ? graph.n_players() : 1;
        if (!payoff || std::get<PayoffVector>(v).size() != expected) {
          add(ViolationKind::kValueKind, node.id,
              "payoff values must be tuples of length " +
                  std::to_string(expected));
          break;
        }
      }
    }
    std::set<NodeId> distinct;
    for (const NodeId& p : node.parents) {
      if (!distinct.insert(p).second) {
        add(ViolationKind::kParentMismatch, node.id,
            "parent '" + p + "' listed twice");
      }
      auto pi = graph.IndexOf(p);
      if (!pi) {
        add(ViolationKind::kUnknownParent, node.id,
            "parent '" + p + "' is not declared");
      } else {
        with_children.insert(*pi);
      }
    }
  }

  std::vector<std::size_t> stuck;
  KahnOrder(graph, &stuck);
  if (!stuck.empty()) {
    std::string names;
    for (std::size_t i : stuck) {
      if (!names.empty()) names += ", ";
      names += graph.nodes()[i].id;
    }
    add(ViolationKind::kCycle, graph.nodes()[stuck.front()].id,
        "edges form a cycle through {" + names + "}");
  }

  for (std::size_t i : with_children) {
    const Node& node = graph.nodes()[i];
    if (node.kind == NodeKind::kPayoff) {
      add(ViolationKind::kPayoffHasChildren, node.id,
          "payoff nodes cannot be parents");
    }
  }

  std::vector<int> per_player(std::max(graph.n_players(), 0), 0);
  int elided = 0;
  int payoff_nodes = 0;
  for (const Node& node : graph.nodes()) {
    switch (node.kind) {
      case NodeKind::kChance:
        ValidateCpd(graph, node, node.cpd, false, report);
        break;
      case NodeKind::kPayoff:
        ++payoff_nodes;
        if (node.owner == kAllPlayers) {
          ++elided;
        } else if (node.owner < 0 || node.owner >= graph.n_players()) {
          add(ViolationKind::kOwner, node.id,
              "owner " + std::to_string(node.owner) + " is out of range");
        } else {
          ++per_player[node.owner];
        }
        ValidateCpd(graph, node, node.cpd, false, report);
        break;
      case NodeKind::kStrategic: {
        if (node.owner < 0 || node.owner >= graph.n_players()) {
          add(ViolationKind::kOwner, node.id,
              "strategic node owner " + std::to_string(node.owner) +
                  " is out of range");
        }
        const StrategyFamily& family = node.family;
        if (family.strategies.empty()) {
          add(ViolationKind::kEmptyFamily, node.id,
              "family '" + family.name + "' has no strategies");
        }
        std::set<std::string> labels;
        for (const Strategy& s : family.strategies) {
          if (!labels.insert(s.label).second) {
            add(ViolationKind::kDuplicateLabel, node.id,
                "label '" + s.label + "' repeats in family '" + family.name +
                    "'");
          }
          ValidateCpd(graph, node, s.cpd, family.deterministic, report);
        }
        break;
      }
    }
  }
  bool one_per_player =
      elided == 0 &&
      std::all_of(per_player.begin(), per_player.end(),
                  [](int c) { return c == 1; }) &&
      payoff_nodes == graph.n_players();
  bool single_elided = elided == 1 && payoff_nodes == 1;
  if (!one_per_player && !single_elided) {
    add(ViolationKind::kPayoffStructure, "",
        "need exactly one payoff node per player or one elided payoff node; "
        "found " +
            std::to_string(payoff_nodes) + " payoff node(s), " +
            std::to_string(elided) + " elided");
  }
  return report;
}

std::vector<std::size_t> TopologicalIndices(const SbnGraph& graph) {
  for (const Node& node : graph.nodes()) {
    for (const NodeId& p : node.parents) {
      if (!graph.Find(p)) {
        throw StructuralError("node '" + node.id + "' has undeclared parent '" +
                              p + "'");
      }
    }
  }
  std::vector<std::size_t> stuck;
  auto order = KahnOrder(graph, &stuck);
  if (!stuck.empty()) {
    throw StructuralError("cycle detected through node '" +
                          graph.nodes()[stuck.front()].id + "'");
  }
  return order;
}

std::vector<NodeId> TopologicalOrder(const SbnGraph& graph) {
  std::vector<NodeId> ids;
  for (std::size_t i : TopologicalIndices(graph)) {
    ids.push_back(graph.nodes()[i].id);
  }
  return ids;
}

std::string ToString(const StrategyProfile& profile) {
  std::string out = "{";
  bool first = true;
  for (const auto& [id, choice] : profile.choices) {
    if (!first) out += ", ";
    first = false;
    out += id + "=" + std::to_string(choice);
  }
  return out + "}";
}

ProfileRange::ProfileRange(const SbnGraph& graph) {
  ids_ = graph.StrategicIds();
  for (const NodeId& id : ids_) {
    sizes_.push_back(graph.node(id).family.strategies.size());
  }
}

std::size_t ProfileRange::size() const {
  std::size_t n = 1;
  for (std::size_t s : sizes_) n *= s;
  return n;
}

ProfileRange::Iterator ProfileRange::begin() const {
  Iterator it;
  it.range_ = this;
  it.done_ = size() == 0;
  for (const NodeId& id : ids_) it.current_.choices[id] = 0;
  return it;
}

ProfileRange::Iterator& ProfileRange::Iterator::operator++() {
  for (std::size_t k = range_->ids_.size(); k-- > 0;) {
    std::size_t& c = current_.choices[range_->ids_[k]];
    if (++c < range_->sizes_[k]) return *this;
    c = 0;
  }
  done_ = true;
  return *this;
}

std::vector<double> OneHot(std::size_t size, std::size_t index) {
  std::vector<double> v(size, 0.0);
  if (index < size) v[index] = 1.0;
  return v;
}

}  // namespace sbn
