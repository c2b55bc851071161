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

// Data model of a strategic Bayesian network: a DAG whose nodes are chance
// nodes (fixed CPD), strategic nodes (CPD picked by the owning player from a
// finite family) and payoff nodes (CPD over payoff tuples).

#ifndef SBN_GRAPH_H_
#define SBN_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sbn/rational.h"
#include "sbn/value.h"

namespace sbn {

using NodeId = std::string;
using PlayerId = int;

// Owner of an elided payoff node that pays every player at once.
inline constexpr PlayerId kAllPlayers = -1;

inline constexpr double kNormalizationTolerance = 1e-12;

// One support entry of a conditional distribution: value index and its mass.
struct Outcome {
  std::uint32_t index;
  double prob;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

enum class ProbabilityMode { kFloat, kRational };

// Conditional probability distribution of a node given its ordered parents.
//
// Two representations share one interface. A table lists rows explicitly,
// keyed by the parent values, with a dense probability vector over the
// node's domain; this is what the JSON format carries. A rule computes the
// row for a parent assignment on demand; the built-in games use rules for
// nodes whose tables would be too large to store (string-valued parents).
class Cpd {
 public:
  struct Row {
    std::vector<Value> given;
    std::vector<double> probs;
    // Exact probabilities; present only for graphs in rational mode.
    std::vector<Rational> exact;
    friend bool operator==(const Row&, const Row&) = default;
  };

  // Writes the support of the row selected by `parent_values` (one domain
  // index per parent) into `out`, which arrives empty. Zero-mass entries may
  // be omitted.
  using Rule = std::function<void(std::span<const std::uint32_t> parent_values,
                                  std::vector<Outcome>& out)>;

  Cpd() = default;

  static Cpd Table(std::vector<NodeId> parents, std::vector<Row> rows);
  // `max_support` bounds the number of entries any row emits.
  static Cpd FromRule(std::vector<NodeId> parents, std::string name,
                      std::size_t max_support, Rule rule);
  // Parentless distribution.
  static Cpd Prior(std::vector<double> probs);
  // Parentless point mass on `index` of a domain of `domain_size` values.
  static Cpd PointMass(std::size_t domain_size, std::size_t index);

  const std::vector<NodeId>& parents() const { return parents_; }
  bool is_rule() const { return static_cast<bool>(rule_); }
  const std::vector<Row>& rows() const { return rows_; }
  const std::string& rule_name() const { return rule_name_; }
  std::size_t rule_max_support() const { return rule_max_support_; }
  const Rule& rule() const { return rule_; }

 private:
  std::vector<NodeId> parents_;
  std::vector<Row> rows_;
  std::string rule_name_;
  std::size_t rule_max_support_ = 0;
  Rule rule_;
};

struct Strategy {
  std::string label;
  Cpd cpd;
};

// Finite action set of a strategic node. `deterministic` marks families
// whose every row must be a point mass.
struct StrategyFamily {
  std::string name;
  std::vector<Strategy> strategies;
  bool deterministic = false;

  std::optional<std::size_t> IndexOf(std::string_view label) const;
};

enum class NodeKind { kChance, kStrategic, kPayoff };

const char* ToString(NodeKind kind);

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::kChance;
  Domain domain;
  std::vector<NodeId> parents;
  // Strategic: owning player. Payoff: paid player, or kAllPlayers.
  PlayerId owner = kAllPlayers;
  Cpd cpd;                // chance and payoff nodes
  StrategyFamily family;  // strategic nodes
};

class SbnGraph {
 public:
  explicit SbnGraph(int n_players,
                    ProbabilityMode mode = ProbabilityMode::kFloat);

  // Throws StructuralError if the id is already taken.
  void AddNode(Node node);

  int n_players() const { return n_players_; }
  ProbabilityMode mode() const { return mode_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const Node* Find(const NodeId& id) const;
  // Throws StructuralError for unknown ids.
  const Node& node(const NodeId& id) const;
  std::optional<std::size_t> IndexOf(const NodeId& id) const;

  // Strategic node ids in canonical (lexicographic) order.
  std::vector<NodeId> StrategicIds() const;

 private:
  int n_players_;
  ProbabilityMode mode_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
};

enum class ViolationKind {
  kCycle,
  kUnknownParent,
  kEmptyDomain,
  kDuplicateValue,
  kValueKind,
  kIncompleteCpd,
  kDuplicateCpdRow,
  kMalformedCpdRow,
  kNotNormalized,
  kNegativeProbability,
  kNotDeterministic,
  kParentMismatch,
  kOwner,
  kEmptyFamily,
  kDuplicateLabel,
  kPayoffStructure,
  kPayoffHasChildren,
  kRationalMode,
};

const char* ToString(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  NodeId node;  // empty for graph-level violations
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(ViolationKind kind) const;
  bool Has(ViolationKind kind, const NodeId& node) const;
  std::string ToString() const;
};

// Reports every violated structural invariant; never throws.
ValidationReport Validate(const SbnGraph& graph);

// Checks a single CPD against `node`'s domain and the graph's parent domains.
// Used by Validate for chance/payoff CPDs and for every family member.
void ValidateCpd(const SbnGraph& graph, const Node& node, const Cpd& cpd,
                 bool require_deterministic, ValidationReport& report);

// Parents before children; ties go to the smallest id. Throws StructuralError
// on cycles or undeclared parents.
std::vector<NodeId> TopologicalOrder(const SbnGraph& graph);
// Same order as indices into graph.nodes().
std::vector<std::size_t> TopologicalIndices(const SbnGraph& graph);

struct StrategyProfile {
  std::map<NodeId, std::size_t> choices;
  friend bool operator==(const StrategyProfile&,
                         const StrategyProfile&) = default;
};

std::string ToString(const StrategyProfile& profile);

// Cross product of every strategic node's family, in lexicographic order of
// (node id, strategy index): the first id varies slowest.
class ProfileRange {
 public:
  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = StrategyProfile;
    using difference_type = std::ptrdiff_t;
    using pointer = const StrategyProfile*;
    using reference = const StrategyProfile&;

    Iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    Iterator& operator++();
    Iterator operator++(int) {
      Iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const Iterator& a, const Iterator& b) {
      return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_);
    }

   private:
    friend class ProfileRange;
    const ProfileRange* range_ = nullptr;
    StrategyProfile current_;
    bool done_ = true;
  };

  explicit ProfileRange(const SbnGraph& graph);

  Iterator begin() const;
  Iterator end() const { return Iterator(); }
  // Product of family sizes.
  std::size_t size() const;

 private:
  std::vector<NodeId> ids_;
  std::vector<std::size_t> sizes_;
};

inline ProfileRange EnumerateProfiles(const SbnGraph& graph) {
  return ProfileRange(graph);
}

// Point mass helper: dense probability vector with a 1 at `index`.
std::vector<double> OneHot(std::size_t size, std::size_t index);

}  // namespace sbn

#endif  // SBN_GRAPH_H_
