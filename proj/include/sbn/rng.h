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

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over the <random> engines
// and distributions because every output here must be bit-identical across
// standard libraries, and because streams are derived by hashing:
//
//   stream i of seed s starts from state  Mix(s ^ Mix(i + kGolden))
//
// so sample i of a Monte Carlo run never depends on how samples were split
// across workers.

#ifndef SBN_RNG_H_
#define SBN_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sbn {

class SplitMix64 {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t StreamSeed(std::uint64_t seed,
                                            std::uint64_t stream) {
    return Mix(seed ^ Mix(stream + kGolden));
  }

  constexpr std::uint64_t Next() {
    state_ += kGolden;
    return Mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double Uniform() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi]; modulo bias is below 2^-40 for small spans.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(Next() % span);
  }

  // Standard normal by Box-Muller; consumes two uniforms per call.
  double Normal() {
    double u1 = 1.0 - Uniform();  // (0, 1]
    double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace sbn

#endif  // SBN_RNG_H_
