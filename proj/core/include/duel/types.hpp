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

#ifndef DUEL_TYPES_HPP_
#define DUEL_TYPES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "duel/error.hpp"

namespace duel {

// K x K skew-symmetric matrix of expected duel outcomes in [-1, 1].
// P(a, b) > 0 means a beats b in expectation; the probability that a wins a
// single duel is (P(a, b) + 1) / 2. Only the upper triangle is stored; the
// lower triangle is derived, so skew-symmetry holds exactly by construction.
class PreferenceMatrix {
 public:
  int k() const { return k_; }

  double entry(int a, int b) const {
    if (a == b) return 0.0;
    return a < b ? upper_[index(a, b)] : -upper_[index(b, a)];
  }

  std::vector<std::vector<double>> dense() const;

 private:
  friend PreferenceMatrix validate_preference_matrix(
      const std::vector<std::vector<double>>& entries);

  PreferenceMatrix(int k, std::vector<double> upper)
      : k_(k), upper_(std::move(upper)) {}

  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * (2 * k_ - a - 1) / 2 + (b - a - 1);
  }

  int k_;
  std::vector<double> upper_;
};

// Accepts a square matrix with entries in [-1, 1] that is skew-symmetric
// within 1e-12 (pairwise sums, diagonal included).
PreferenceMatrix validate_preference_matrix(
    const std::vector<std::vector<double>>& entries);

// Nonnegative weights summing to 1 within 1e-9.
class SimplexDistribution {
 public:
  explicit SimplexDistribution(std::vector<double> weights);

  const std::vector<double>& weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  int size() const { return static_cast<int>(weights_.size()); }

 private:
  std::vector<double> weights_;
};

// Deterministic map from context index to action, stored as one action per
// context. Actions and contexts are 0-indexed.
class Policy {
 public:
  Policy(std::vector<int> actions, int k);

  int action(int context) const;
  int contexts() const { return static_cast<int>(actions_.size()); }
  int k() const { return k_; }
  const std::vector<int>& actions() const { return actions_; }

  friend bool operator==(const Policy& lhs, const Policy& rhs) {
    return lhs.actions_ == rhs.actions_;
  }
  friend bool operator<(const Policy& lhs, const Policy& rhs) {
    return lhs.actions_ < rhs.actions_;
  }

 private:
  std::vector<int> actions_;
  int k_;
};

// Finite policy space: either an explicit duplicate-free list (Tabular) or
// the implicit set of all K^C maps (FullMapping). FullMapping classes are
// never materialized; formulas use log_size() = C ln K, and policy_at
// enumerates on demand (context 0 is the least-significant digit).
class PolicyClass {
 public:
  enum class Kind { kTabular, kFullMapping };

  static PolicyClass tabular(int k, std::vector<Policy> policies);
  static PolicyClass full_mapping(int contexts, int k);

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  int contexts() const { return contexts_; }

  double log_size() const;
  bool enumerable(std::int64_t cap) const;
  // |Pi| when it does not exceed cap; throws ClassTooLarge otherwise.
  std::int64_t enumeration_count(std::int64_t cap) const;
  Policy policy_at(std::int64_t index) const;
  const std::vector<Policy>& tabular_policies() const;

 private:
  PolicyClass(Kind kind, int k, int contexts, std::vector<Policy> policies)
      : kind_(kind), k_(k), contexts_(contexts), policies_(std::move(policies)) {}

  Kind kind_;
  int k_;
  int contexts_;
  std::vector<Policy> policies_;
};

struct MixtureAtom {
  double weight;
  Policy policy;
};

// Probability-weighted list of distinct policies; the representation of
// approximate von Neumann winners over a policy class.
class PolicyMixture {
 public:
  explicit PolicyMixture(std::vector<MixtureAtom> atoms);

  const std::vector<MixtureAtom>& atoms() const { return atoms_; }
  int size() const { return static_cast<int>(atoms_.size()); }

 private:
  std::vector<MixtureAtom> atoms_;
};

// Merges atoms with identical policy representation (keeping first-seen
// order), drops zero weights, and renormalizes to sum 1.
PolicyMixture mixture_normalize(const std::vector<MixtureAtom>& atoms);

}  // namespace duel

#endif  // DUEL_TYPES_HPP_
