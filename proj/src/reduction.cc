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

#include "sbn/reduction.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "sbn/bound_network.h"
#include "sbn/error.h"
#include "sbn/serialization.h"

namespace sbn {
namespace {

std::size_t NonZero(std::span<const Outcome> row) {
  std::size_t n = 0;
  for (const Outcome& o : row) n += o.prob > 0.0 ? 1 : 0;
  return n;
}

void CheckTierOrder(const SbnGraph& graph,
                    const std::vector<NodeId>& tier_order) {
  std::vector<NodeId> sorted = tier_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != graph.StrategicIds()) {
    throw ContractError(
        "tier order must list every strategic node exactly once");
  }
  for (const NodeId& id : tier_order) {
    if (graph.node(id).family.strategies.empty()) {
      throw StructuralError("strategic node '" + id + "' has an empty family");
    }
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const std::shared_ptr<const SbnGraph>& graph,
              const std::vector<NodeId>& tier_order, std::size_t max_nodes)
      : graph_(graph), tiers_(tier_order), max_nodes_(max_nodes) {
    tree_.n_players = graph->n_players();
    tree_.tier_order = tier_order;
    histories_.resize(graph->n_players());
  }

  ExtensiveTree Build() {
    BuildTier(0);
    return std::move(tree_);
  }

 private:
  std::size_t NewNode(TreeNode node) {
    if (tree_.nodes.size() >= max_nodes_) {
      throw CapacityError("extensive form exceeds " +
                          std::to_string(max_nodes_) + " nodes");
    }
    tree_.nodes.push_back(std::move(node));
    return tree_.nodes.size() - 1;
  }

  std::size_t BuildTier(std::size_t t) {
    if (t == tiers_.size()) return BuildProfile();
    const NodeId& id = tiers_[t];
    const Node& node = graph_->node(id);
    auto& history = histories_[node.owner];
    auto key = std::make_pair(id, history);
    auto [it, inserted] = info_index_.emplace(key, tree_.info_sets.size());
    if (inserted) {
      InfoSet set;
      set.id = it->second;
      set.player = node.owner;
      set.source = id;
      set.history = history;
      tree_.info_sets.push_back(std::move(set));
    }
    DecisionNode decision;
    decision.player = node.owner;
    decision.source = id;
    decision.info_set = it->second;
    std::size_t self = NewNode(std::move(decision));
    tree_.info_sets[it->second].members.push_back(self);

    std::vector<std::size_t> children;
    for (std::size_t a = 0; a < node.family.strategies.size(); ++a) {
      profile_.choices[id] = a;
      history.emplace_back(id, a);
      children.push_back(BuildTier(t + 1));
      history.pop_back();
    }
    profile_.choices.erase(id);
    std::get<DecisionNode>(tree_.nodes[self]).children = std::move(children);
    return self;
  }

  std::size_t BuildProfile() {
    BoundNetwork bound = Bind(graph_, profile_);
    assignment_.assign(graph_->size(), 0);
    payoff_.assign(graph_->n_players(), 0.0);
    scratch_.assign(bound.order().size(), {});
    return Unfold(bound, 0);
  }

  std::size_t Unfold(const BoundNetwork& bound, std::size_t depth) {
    const auto& order = bound.order();
    if (depth == order.size()) return NewNode(LeafNode{payoff_});
    std::size_t u = order[depth];
    auto row = bound.Row(u, assignment_, scratch_[depth]);
    const bool payoff = bound.is_payoff(u);

    if (NonZero(row) == 1) {
      const Outcome* o = &row[0];
      while (o->prob <= 0.0) ++o;
      assignment_[u] = o->index;
      if (payoff) Add(bound.Payoff(u, o->index), 1.0);
      std::size_t child = Unfold(bound, depth + 1);
      if (payoff) Add(bound.Payoff(u, o->index), -1.0);
      return child;
    }

    const Node& node = graph_->nodes()[u];
    std::vector<double> dense(node.domain.size(), 0.0);
    for (const Outcome& o : row) dense[o.index] += o.prob;

    ChanceNode chance;
    chance.source = node.id;
    std::size_t self = NewNode(std::move(chance));
    std::vector<ChanceNode::Branch> branches;
    for (std::uint32_t v = 0; v < dense.size(); ++v) {
      ChanceNode::Branch b;
      b.value = v;
      b.prob = dense[v];
      assignment_[u] = v;
      if (payoff) {
        auto pay = bound.Payoff(u, v);
        b.label.assign(pay.begin(), pay.end());
        Add(pay, 1.0);
      }
      b.child = Unfold(bound, depth + 1);
      if (payoff) Add(bound.Payoff(u, v), -1.0);
      branches.push_back(std::move(b));
    }
    assignment_[u] = 0;
    std::get<ChanceNode>(tree_.nodes[self]).branches = std::move(branches);
    return self;
  }

  void Add(std::span<const double> pay, double sign) {
    for (std::size_t k = 0; k < pay.size(); ++k) payoff_[k] += sign * pay[k];
  }

  std::shared_ptr<const SbnGraph> graph_;
  const std::vector<NodeId>& tiers_;
  std::size_t max_nodes_;
  ExtensiveTree tree_;
  StrategyProfile profile_;
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> histories_;
  std::map<std::pair<NodeId, std::vector<std::pair<NodeId, std::size_t>>>,
           InfoSetId>
      info_index_;
  std::vector<std::uint32_t> assignment_;
  std::vector<double> payoff_;
  std::vector<std::vector<Outcome>> scratch_;
};

// 0: every row is a point mass, 1: no row is, -1: mixed.
int Classify(const BoundNetwork& bound, std::size_t u) {
  const auto& c = bound.compiled(u);
  std::vector<std::uint32_t> assignment(bound.graph().size(), 0);
  std::vector<Outcome> scratch;
  std::size_t total = 1;
  for (std::size_t r : c.radix) total *= r;
  bool any_point = false;
  bool any_spread = false;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = c.parents.size(); k-- > 0;) {
      assignment[c.parents[k]] = static_cast<std::uint32_t>(rest % c.radix[k]);
      rest /= c.radix[k];
    }
    scratch.clear();
    if (NonZero(bound.Row(u, assignment, scratch)) == 1) {
      any_point = true;
    } else {
      any_spread = true;
    }
    if (any_point && any_spread) return -1;
  }
  return any_spread ? 1 : 0;
}

}  // namespace

ExtensiveTree ToExtensiveForm(const std::shared_ptr<const SbnGraph>& graph,
                              const std::vector<NodeId>& tier_order,
                              std::size_t max_nodes) {
  CheckTierOrder(*graph, tier_order);
  for (const Node& node : graph->nodes()) {
    if (node.domain.empty()) {
      throw StructuralError("node '" + node.id + "' has an empty domain");
    }
  }
  return TreeBuilder(graph, tier_order, max_nodes).Build();
}

ExtensiveTree ToExtensiveForm(const std::shared_ptr<const SbnGraph>& graph) {
  return ToExtensiveForm(graph, graph->StrategicIds());
}

std::vector<double> TreeExpectedPayoffs(const ExtensiveTree& tree,
                                        const StrategyProfile& profile) {
  std::vector<double> out(tree.n_players, 0.0);
  if (tree.nodes.empty()) return out;
  // Explicit stack of (node, weight) so deep trees do not recurse.
  std::vector<std::pair<std::size_t, double>> stack = {{tree.root(), 1.0}};
  while (!stack.empty()) {
    auto [i, w] = stack.back();
    stack.pop_back();
    const TreeNode& node = tree.nodes[i];
    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      auto it = profile.choices.find(d->source);
      if (it == profile.choices.end()) {
        throw BindingError(d->source + " unbound");
      }
      if (it->second >= d->children.size()) {
        throw BindingError(d->source + " choice " +
                           std::to_string(it->second) + " out of range");
      }
      stack.emplace_back(d->children[it->second], w);
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      for (const auto& b : c->branches) {
        if (b.prob > 0.0) stack.emplace_back(b.child, w * b.prob);
      }
    } else {
      const auto& leaf = std::get<LeafNode>(node);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * leaf.payoffs[k];
    }
  }
  return out;
}

TreeCounts CountTreeNodes(const ExtensiveTree& tree) {
  TreeCounts counts;
  for (const TreeNode& node : tree.nodes) {
    switch (node.index()) {
      case 0: ++counts.decision; break;
      case 1: ++counts.chance; break;
      default: ++counts.leaf; break;
    }
  }
  return counts;
}

std::optional<TreeCounts> PredictTreeCounts(
    const std::shared_ptr<const SbnGraph>& graph,
    const std::vector<NodeId>& tier_order) {
  CheckTierOrder(*graph, tier_order);
  TreeCounts counts;
  std::size_t prefix = 1;
  for (const NodeId& id : tier_order) {
    counts.decision += prefix;
    prefix *= graph->node(id).family.strategies.size();
  }
  for (const StrategyProfile& profile : EnumerateProfiles(*graph)) {
    BoundNetwork bound = Bind(graph, profile);
    std::size_t paths = 1;
    for (std::size_t u : bound.order()) {
      int kind = Classify(bound, u);
      if (kind < 0) return std::nullopt;
      if (kind == 1) {
        counts.chance += paths;
        paths *= graph->nodes()[u].domain.size();
      }
    }
    counts.leaf += paths;
  }
  return counts;
}

double ClaimedNodeCount(const SbnGraph& graph) {
  double product = 1.0;
  for (const Node& node : graph.nodes()) {
    product *= static_cast<double>(node.domain.size());
  }
  return 1.0 + product;
}

nlohmann::ordered_json TreeToJson(const SbnGraph& graph,
                                  const ExtensiveTree& tree) {
  using nlohmann::ordered_json;
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    ordered_json j;
    j["id"] = i;
    const TreeNode& node = tree.nodes[i];
    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      j["kind"] = "decision";
      j["player"] = d->player;
      j["source"] = d->source;
      j["info_set"] = d->info_set;
      j["children"] = d->children;
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      j["kind"] = "chance";
      j["source"] = c->source;
      const Domain& domain = graph.node(c->source).domain;
      ordered_json branches = ordered_json::array();
      for (const auto& b : c->branches) {
        ordered_json bj;
        bj["value"] = ValueToJson(domain[b.value]);
        bj["p"] = b.prob;
        bj["child"] = b.child;
        if (!b.label.empty()) bj["label"] = b.label;
        branches.push_back(std::move(bj));
      }
      j["branches"] = std::move(branches);
    } else {
      j["kind"] = "leaf";
      j["payoffs"] = std::get<LeafNode>(node).payoffs;
    }
    nodes.push_back(std::move(j));
  }
  ordered_json sets = ordered_json::array();
  for (const InfoSet& s : tree.info_sets) {
    ordered_json sj;
    sj["id"] = s.id;
    sj["player"] = s.player;
    sj["source"] = s.source;
    ordered_json history = ordered_json::array();
    for (const auto& [id, a] : s.history) {
      history.push_back(ordered_json::array({id, a}));
    }
    sj["history"] = std::move(history);
    sj["members"] = s.members;
    sets.push_back(std::move(sj));
  }
  ordered_json out;
  out["players"] = tree.n_players;
  out["tier_order"] = tree.tier_order;
  out["root"] = tree.root();
  out["nodes"] = std::move(nodes);
  out["info_sets"] = std::move(sets);
  return out;
}

}  // namespace sbn
