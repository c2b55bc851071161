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

#ifndef SBN_INFERENCE_H_
#define SBN_INFERENCE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "sbn/bound_network.h"
#include "sbn/rational.h"

namespace sbn {

inline constexpr std::size_t kDefaultMaxSupport = 2'000'000;

// Enumeration cap: SBN_MAX_SUPPORT if set to a positive integer, otherwise
// kDefaultMaxSupport.
std::size_t MaxSupportFromEnv();

// One play of the game.
struct WorldOutcome {
  std::vector<std::uint32_t> assignment;  // value index per graph node
  std::vector<double> payoffs;            // one per player

  std::map<NodeId, Value> Values(const SbnGraph& graph) const;
};

// Ancestral sampling in topological order from stream `seed`.
WorldOutcome Sample(const BoundNetwork& bound, std::uint64_t seed);

struct EnumerationStats {
  std::vector<double> payoffs;  // expected payoff per player
  double total_probability = 0.0;
  std::size_t leaves = 0;       // positive-probability joint outcomes
  std::size_t zero_branches_visited = 0;
};

// Called once per positive-probability joint assignment.
using JointVisitor =
    std::function<void(std::span<const std::uint32_t> assignment, double p)>;

// Depth-first enumeration in topological order that never descends into a
// zero-probability branch. Throws CapacityError when the joint support
// exceeds `max_support`.
EnumerationStats EnumerateJoint(const BoundNetwork& bound,
                                std::size_t max_support,
                                const JointVisitor& visitor = {});

// Σ P(assignment) · payoff(assignment), per player.
std::vector<double> ExactExpectedPayoffs(const BoundNetwork& bound,
                                         std::size_t max_support);

struct ExactRationalResult {
  std::vector<Rational> payoffs;
  Rational total_probability;
  std::size_t leaves = 0;
};

// Same enumeration with exact arithmetic; needs a rational-mode graph.
ExactRationalResult ExactExpectedPayoffsRational(const BoundNetwork& bound,
                                                 std::size_t max_support);

struct PayoffEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Sample i is drawn from stream SplitMix64::StreamSeed(seed, i). Samples are
// reduced in fixed-size blocks combined pairwise in index order, so the
// result does not depend on `workers` (0 = hardware concurrency).
PayoffEstimate MonteCarloExpectedPayoffs(const BoundNetwork& bound,
                                         std::size_t n_samples,
                                         std::uint64_t seed, int workers = 1);

}  // namespace sbn

#endif  // SBN_INFERENCE_H_
