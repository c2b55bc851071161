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

// Extensive-form view of an SBN.
//
// The tree starts with one tier of decision nodes per strategic node, in
// `tier_order`; each decision node branches once per family member. A
// decision node for strategic node r joins the information set of every
// other r-node whose path from the root carries the same actions by r's
// owner; other players' actions are invisible, own actions are recalled.
//
// Each leaf of the tiers fixes a profile. Below it the bound network is
// unfolded in topological order. A node whose row on the current path is a
// point mass is resolved inline; otherwise it becomes a chance node with
// one branch per domain value, zero-probability branches included. Payoff
// values met on the path (inline or as chance branch labels) are summed
// into the leaf.
//
// Node counts follow from this construction. With family sizes m_1..m_T in
// tier order and, for a profile where every node is either always
// point-mass or never point-mass, branching domain sizes d_1..d_K in
// topological order:
//
//   decision = sum_{t=1..T} prod_{s<t} m_s
//   chance   = sum_{profiles} sum_{k=1..K} prod_{j<k} d_j
//   leaf     = sum_{profiles} prod_{k=1..K} d_k
//
// PredictTreeCounts evaluates this recurrence without building the tree.

#ifndef SBN_REDUCTION_H_
#define SBN_REDUCTION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sbn/graph.h"

namespace sbn {

using InfoSetId = std::size_t;

struct DecisionNode {
  PlayerId player = 0;
  NodeId source;
  InfoSetId info_set = 0;
  std::vector<std::size_t> children;  // child k follows action k
};

struct ChanceNode {
  struct Branch {
    std::uint32_t value = 0;     // index into the source node's domain
    double prob = 0.0;
    std::size_t child = 0;
    std::vector<double> label;   // payoff awarded; payoff sources only
  };
  NodeId source;
  std::vector<Branch> branches;
};

struct LeafNode {
  std::vector<double> payoffs;
};

using TreeNode = std::variant<DecisionNode, ChanceNode, LeafNode>;

struct InfoSet {
  InfoSetId id = 0;
  PlayerId player = 0;
  NodeId source;
  // The owner's own earlier (strategic node, action) choices.
  std::vector<std::pair<NodeId, std::size_t>> history;
  std::vector<std::size_t> members;
};

struct ExtensiveTree {
  int n_players = 0;
  std::vector<NodeId> tier_order;
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<InfoSet> info_sets;

  std::size_t root() const { return 0; }
};

inline constexpr std::size_t kDefaultMaxTreeNodes = 5'000'000;

// Throws ContractError if tier_order is not a permutation of the strategic
// ids, StructuralError for empty families, CapacityError past `max_nodes`.
ExtensiveTree ToExtensiveForm(const std::shared_ptr<const SbnGraph>& graph,
                              const std::vector<NodeId>& tier_order,
                              std::size_t max_nodes = kDefaultMaxTreeNodes);
// Canonical tier order: strategic ids sorted.
ExtensiveTree ToExtensiveForm(const std::shared_ptr<const SbnGraph>& graph);

// Follows the profile at decision nodes and takes expectations at chance
// nodes. Throws BindingError for missing or out-of-range choices.
std::vector<double> TreeExpectedPayoffs(const ExtensiveTree& tree,
                                        const StrategyProfile& profile);

struct TreeCounts {
  std::size_t decision = 0;
  std::size_t chance = 0;
  std::size_t leaf = 0;
  friend bool operator==(const TreeCounts&, const TreeCounts&) = default;
};

TreeCounts CountTreeNodes(const ExtensiveTree& tree);

// Closed-form counts from the recurrence above; nullopt when some node mixes
// point-mass and spread rows under a profile.
std::optional<TreeCounts> PredictTreeCounts(
    const std::shared_ptr<const SbnGraph>& graph,
    const std::vector<NodeId>& tier_order);

// 1 + prod_u |D_u|, the size claimed for the unfolded tree. Reported next
// to the traversal count for comparison only.
double ClaimedNodeCount(const SbnGraph& graph);

nlohmann::ordered_json TreeToJson(const SbnGraph& graph,
                                  const ExtensiveTree& tree);

}  // namespace sbn

#endif  // SBN_REDUCTION_H_
