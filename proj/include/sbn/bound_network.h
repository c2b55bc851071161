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

#ifndef SBN_BOUND_NETWORK_H_
#define SBN_BOUND_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "sbn/graph.h"
#include "sbn/rational.h"

namespace sbn {

// A graph with every strategic node fixed to one family member: an ordinary
// Bayesian network. Holds a compiled, index-based view of every CPD so the
// inference and reduction code can look rows up by parent value indices.
class BoundNetwork {
 public:
  struct Compiled {
    std::size_t node = 0;                // index into graph().nodes()
    std::vector<std::size_t> parents;    // node indices, CPD parent order
    std::vector<std::size_t> radix;      // parent domain sizes
    const Cpd* cpd = nullptr;
    // Table CPDs only: nonzero entries per mixed-radix parent assignment.
    std::vector<std::vector<Outcome>> rows;
    std::vector<std::vector<Rational>> exact_rows;  // rational mode
    std::size_t max_support = 0;
  };

  const SbnGraph& graph() const { return *graph_; }
  const std::shared_ptr<const SbnGraph>& shared_graph() const {
    return graph_;
  }
  const StrategyProfile& profile() const { return profile_; }

  // Resolved CPD of a node: the chosen member for strategic nodes, the
  // node's own CPD otherwise.
  const Cpd& resolved(const NodeId& id) const;
  std::map<NodeId, const Cpd*> ResolvedMap() const;

  // Node indices in topological order.
  const std::vector<std::size_t>& order() const { return order_; }
  const Compiled& compiled(std::size_t node) const { return compiled_[node]; }

  // Support of `node`'s row given a full assignment (one value index per
  // graph node; only the parents' entries are read). Table rows are
  // returned in place; rule rows are written to `scratch`.
  std::span<const Outcome> Row(std::size_t node,
                               std::span<const std::uint32_t> assignment,
                               std::vector<Outcome>& scratch) const;
  // Exact probabilities parallel to Row(); rational mode, table CPDs only.
  std::span<const Rational> ExactRow(
      std::size_t node, std::span<const std::uint32_t> assignment) const;

  // Payoff contributions, indexed [payoff value index][player].
  bool is_payoff(std::size_t node) const { return !payoff_[node].empty(); }
  std::span<const double> Payoff(std::size_t node, std::size_t value) const {
    return payoff_[node][value];
  }
  std::span<const Rational> ExactPayoff(std::size_t node,
                                        std::size_t value) const {
    return exact_payoff_[node][value];
  }

  // Product over nodes of the largest row support: an upper bound on the
  // number of positive-probability joint outcomes.
  double SupportBound() const;

 private:
  friend BoundNetwork Bind(std::shared_ptr<const SbnGraph> graph,
                           const StrategyProfile& profile);
  BoundNetwork() = default;

  std::size_t RowIndex(const Compiled& c,
                       std::span<const std::uint32_t> assignment) const;

  std::shared_ptr<const SbnGraph> graph_;
  StrategyProfile profile_;
  std::vector<std::size_t> order_;
  std::vector<Compiled> compiled_;  // indexed by node index
  std::vector<std::vector<std::vector<double>>> payoff_;
  std::vector<std::vector<std::vector<Rational>>> exact_payoff_;
};

// Substitutes each strategic node's chosen action CPD. Throws BindingError
// for missing, unknown or out-of-range choices and StructuralError when a
// table CPD does not cover its parent assignments.
BoundNetwork Bind(std::shared_ptr<const SbnGraph> graph,
                  const StrategyProfile& profile);

}  // namespace sbn

#endif  // SBN_BOUND_NETWORK_H_
