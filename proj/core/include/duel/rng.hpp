// Copyright 2026 The Duel Authors.
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

#ifndef DUEL_RNG_HPP_
#define DUEL_RNG_HPP_

#include <cstdint>

namespace duel {

// SplitMix64 generator. Every stochastic operation in the library takes one
// of these explicitly, so runs are bit-reproducible across platforms (the
// standard <random> distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Decorrelated stream for a fixed (seed, stream_id) pair. Stages of a run
  // derive their generators through distinct stream ids so that re-running a
  // single stage reproduces it bit-for-bit.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(finalize(seed + (stream_id + 1) * kGolden));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return finalize(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n) without modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  int next_index(int n) { return static_cast<int>(next_below(static_cast<std::uint64_t>(n))); }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Stream ids used by the pipeline; call sites pass these to Rng::stream so
// stages never share a generator.
namespace streams {
inline constexpr std::uint64_t kEnvGenerator = 1;
inline constexpr std::uint64_t kExplore = 2;
inline constexpr std::uint64_t kSparringContexts = 3;
inline constexpr std::uint64_t kSparringDuels = 4;
inline constexpr std::uint64_t kSparringRow = 5;
inline constexpr std::uint64_t kSparringCol = 6;
inline constexpr std::uint64_t kSparringAnalysis = 7;
inline constexpr std::uint64_t kSolverPerturbations = 8;
inline constexpr std::uint64_t kExploit = 9;
}  // namespace streams

}  // namespace duel

#endif  // DUEL_RNG_HPP_
