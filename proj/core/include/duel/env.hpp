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

#ifndef DUEL_ENV_HPP_
#define DUEL_ENV_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "duel/rng.hpp"
#include "duel/types.hpp"

namespace duel {

struct ContextEntry {
  double q;
  PreferenceMatrix matrix;
};

// Finite-support distribution over (context, preference matrix) pairs with a
// deterministic matrix per context, so the meta-matrix is exactly computable.
class ContextualEnvironment {
 public:
  ContextualEnvironment(std::vector<ContextEntry> contexts, std::uint64_t seed);

  int k() const { return contexts_.front().matrix.k(); }
  int contexts() const { return static_cast<int>(contexts_.size()); }
  double q(int s) const { return contexts_[s].q; }
  const PreferenceMatrix& matrix(int s) const { return contexts_[s].matrix; }
  const std::vector<ContextEntry>& entries() const { return contexts_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<ContextEntry> contexts_;
  std::uint64_t seed_;
};

struct DuelRecord {
  std::int64_t round;
  int context;
  int a;
  int b;
  int r;  // in {-1, +1}
};

int sample_round(const ContextualEnvironment& env, Rng& rng);

// One stochastic comparison: +1 with probability (P(a,b)+1)/2, else -1.
// duel(a, a) is a fair coin.
int duel(const ContextualEnvironment& env, int context, int a, int b, Rng& rng);

// Preference matrix over an enumerated policy class:
// M(pi, rho) = sum_s q_s P_s(pi(x_s), rho(x_s)).
class MetaMatrix {
 public:
  MetaMatrix(std::vector<std::vector<double>> entries);

  int size() const { return static_cast<int>(entries_.size()); }
  double entry(std::int64_t i, std::int64_t j) const {
    return entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const std::vector<std::vector<double>>& entries() const { return entries_; }
  PreferenceMatrix as_preference_matrix() const;

 private:
  std::vector<std::vector<double>> entries_;
};

MetaMatrix exact_meta_matrix(const ContextualEnvironment& env,
                             const PolicyClass& policy_class,
                             std::int64_t cap = 10'000);

// Regret of the played pairs against the best policy in the class:
// max_pi (1/2) sum_t [P_t(pi(x_t), a_t) + P_t(pi(x_t), b_t)].
// The true matrix of each round is the environment's matrix for the recorded
// context. For FullMapping classes the maximum decomposes per context.
double regret(const ContextualEnvironment& env,
              const std::vector<DuelRecord>& ledger,
              const PolicyClass& policy_class);

// Cumulative regret after each prefix of the ledger; the last entry equals
// regret(env, ledger, policy_class).
std::vector<double> regret_curve(const ContextualEnvironment& env,
                                 const std::vector<DuelRecord>& ledger,
                                 const PolicyClass& policy_class);

// Generator spec for make_environment. kind is one of: cycle, condorcet,
// clone, appendix_b_5arm, random_skew, utility, composite. clone's k counts
// the dominated rest arms (the matrix has k+4 arms). composite entries carry
// per-context weights in q and single-context sub-specs.
struct EnvSpec {
  std::string kind;
  int k = 0;
  std::vector<double> utility;
  std::vector<double> q;
  std::vector<EnvSpec> components;
};

ContextualEnvironment make_environment(const EnvSpec& spec, std::uint64_t seed);

}  // namespace duel

#endif  // DUEL_ENV_HPP_
