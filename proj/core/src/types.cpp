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

#include "duel/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace duel {

namespace {
constexpr double kSkewTolerance = 1e-12;
constexpr double kSimplexTolerance = 1e-9;
}  // namespace

std::vector<std::vector<double>> PreferenceMatrix::dense() const {
  std::vector<std::vector<double>> out(k_, std::vector<double>(k_, 0.0));
  for (int a = 0; a < k_; ++a) {
    for (int b = 0; b < k_; ++b) out[a][b] = entry(a, b);
  }
  return out;
}

PreferenceMatrix validate_preference_matrix(
    const std::vector<std::vector<double>>& entries) {
  const int k = static_cast<int>(entries.size());
  if (k < 1) throw DimensionMismatch("preference matrix must have K >= 1");
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(entries[a].size()) != k) {
      throw DimensionMismatch("preference matrix row " + std::to_string(a) +
                              " has " + std::to_string(entries[a].size()) +
                              " entries, expected " + std::to_string(k));
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double v = entries[a][b];
      if (!(v >= -1.0 && v <= 1.0)) throw RangeViolation(a, b, v);
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      if (std::abs(entries[a][b] + entries[b][a]) > kSkewTolerance) {
        throw SkewSymmetryViolation(a, b);
      }
    }
  }
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) upper.push_back(entries[a][b]);
  }
  return PreferenceMatrix(k, std::move(upper));
}

SimplexDistribution::SimplexDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw InvalidDistribution("distribution must have at least one weight");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) {
      throw InvalidDistribution("distribution weight " + std::to_string(w) +
                                " is negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw InvalidDistribution("distribution weights sum to " +
                              std::to_string(sum) + ", expected 1");
  }
}

Policy::Policy(std::vector<int> actions, int k)
    : actions_(std::move(actions)), k_(k) {
  if (k_ < 1) throw BadParams("policy needs K >= 1");
  if (actions_.empty()) throw BadParams("policy needs at least one context");
  for (int a : actions_) {
    if (a < 0 || a >= k_) {
      throw BadParams("policy action " + std::to_string(a) +
                      " outside [0, " + std::to_string(k_) + ")");
    }
  }
}

int Policy::action(int context) const {
  if (context < 0 || context >= contexts()) {
    throw BadParams("context " + std::to_string(context) + " outside [0, " +
                    std::to_string(contexts()) + ")");
  }
  return actions_[context];
}

PolicyClass PolicyClass::tabular(int k, std::vector<Policy> policies) {
  if (policies.empty()) throw BadParams("tabular class must be non-empty");
  const int contexts = policies.front().contexts();
  for (const Policy& p : policies) {
    if (p.contexts() != contexts || p.k() != k) {
      throw DimensionMismatch("tabular policies disagree on (C, K)");
    }
  }
  std::vector<const Policy*> sorted;
  sorted.reserve(policies.size());
  for (const Policy& p : policies) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const Policy* a, const Policy* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (*sorted[i - 1] == *sorted[i]) {
      throw DuplicatePolicy("tabular class contains duplicate policies");
    }
  }
  return PolicyClass(Kind::kTabular, k, contexts, std::move(policies));
}

PolicyClass PolicyClass::full_mapping(int contexts, int k) {
  if (contexts < 1 || k < 1) throw BadParams("full mapping needs C, K >= 1");
  return PolicyClass(Kind::kFullMapping, k, contexts, {});
}

double PolicyClass::log_size() const {
  if (kind_ == Kind::kTabular) {
    return std::log(static_cast<double>(policies_.size()));
  }
  return contexts_ * std::log(static_cast<double>(k_));
}

bool PolicyClass::enumerable(std::int64_t cap) const {
  if (kind_ == Kind::kTabular) {
    return static_cast<std::int64_t>(policies_.size()) <= cap;
  }
  std::int64_t n = 1;
  for (int s = 0; s < contexts_; ++s) {
    if (n > cap / k_) return false;
    n *= k_;
  }
  return n <= cap;
}

std::int64_t PolicyClass::enumeration_count(std::int64_t cap) const {
  if (!enumerable(cap)) {
    throw ClassTooLarge("policy class exceeds enumeration cap " +
                        std::to_string(cap));
  }
  if (kind_ == Kind::kTabular) {
    return static_cast<std::int64_t>(policies_.size());
  }
  std::int64_t n = 1;
  for (int s = 0; s < contexts_; ++s) n *= k_;
  return n;
}

Policy PolicyClass::policy_at(std::int64_t index) const {
  if (kind_ == Kind::kTabular) {
    if (index < 0 || index >= static_cast<std::int64_t>(policies_.size())) {
      throw BadParams("policy index out of range");
    }
    return policies_[static_cast<std::size_t>(index)];
  }
  std::vector<int> actions(contexts_);
  std::int64_t rest = index;
  for (int s = 0; s < contexts_; ++s) {
    actions[s] = static_cast<int>(rest % k_);
    rest /= k_;
  }
  if (rest != 0 || index < 0) throw BadParams("policy index out of range");
  return Policy(std::move(actions), k_);
}

const std::vector<Policy>& PolicyClass::tabular_policies() const {
  if (kind_ != Kind::kTabular) {
    throw BadParams("full-mapping classes have no materialized policy list");
  }
  return policies_;
}

PolicyMixture::PolicyMixture(std::vector<MixtureAtom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw EmptyMixture("mixture must have at least one atom");
  double sum = 0.0;
  for (const MixtureAtom& atom : atoms_) {
    if (!(atom.weight >= 0.0)) {
      throw NegativeWeight("mixture weight " + std::to_string(atom.weight));
    }
    sum += atom.weight;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw InvalidDistribution("mixture weights sum to " + std::to_string(sum) +
                              ", expected 1");
  }
}

PolicyMixture mixture_normalize(const std::vector<MixtureAtom>& atoms) {
  double total = 0.0;
  for (const MixtureAtom& atom : atoms) {
    if (!(atom.weight >= 0.0)) {
      throw NegativeWeight("mixture weight " + std::to_string(atom.weight));
    }
    total += atom.weight;
  }
  if (!(total > 0.0)) {
    throw EmptyMixture("mixture has no atom with positive weight");
  }
  std::map<std::vector<int>, std::size_t> seen;
  std::vector<MixtureAtom> merged;
  for (const MixtureAtom& atom : atoms) {
    auto [it, inserted] = seen.try_emplace(atom.policy.actions(), merged.size());
    if (inserted) {
      merged.push_back({atom.weight / total, atom.policy});
    } else {
      merged[it->second].weight += atom.weight / total;
    }
  }
  std::erase_if(merged, [](const MixtureAtom& a) { return a.weight <= 0.0; });
  return PolicyMixture(std::move(merged));
}

}  // namespace duel
