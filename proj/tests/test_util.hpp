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

#ifndef DUEL_TESTS_TEST_UTIL_HPP_
#define DUEL_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "duel/batch.hpp"
#include "duel/env.hpp"
#include "duel/types.hpp"

namespace duel_test {

inline duel::ContextualEnvironment single_context(const std::string& kind,
                                                  int k,
                                                  std::uint64_t seed = 0) {
  duel::EnvSpec spec;
  spec.kind = kind;
  spec.k = k;
  return duel::make_environment(spec, seed);
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double out = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) out += x[i] * y[i];
  return out;
}

inline double l2_dist(const std::vector<double>& x,
                      const std::vector<double>& y) {
  double out = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    out += d * d;
  }
  return std::sqrt(out);
}

// Payoff of a row mixture against the worst pure column on an estimated
// matrix over the enumerated class (row index = policy enumeration index).
inline double mixture_margin_on(const std::vector<std::vector<double>>& mhat,
                                const duel::PolicyMixture& mixture,
                                const duel::PolicyClass& policy_class) {
  const std::int64_t n = policy_class.enumeration_count(1 << 20);
  std::vector<double> row_weight(static_cast<std::size_t>(n), 0.0);
  for (const duel::MixtureAtom& atom : mixture.atoms()) {
    for (std::int64_t j = 0; j < n; ++j) {
      if (policy_class.policy_at(j) == atom.policy) {
        row_weight[j] += atom.weight;
        break;
      }
    }
  }
  double margin = 0.0;
  for (std::int64_t col = 0; col < n; ++col) {
    double value = 0.0;
    for (std::int64_t row = 0; row < n; ++row) {
      value += row_weight[row] * mhat[row][col];
    }
    if (col == 0 || value < margin) margin = value;
  }
  return margin;
}

// Exact maxmin value of a 2x2 zero-sum game (row maximizes).
inline double maxmin_2x2(const std::vector<std::vector<double>>& m) {
  const double maxmin_pure =
      std::max(std::min(m[0][0], m[0][1]), std::min(m[1][0], m[1][1]));
  const double minmax_pure =
      std::min(std::max(m[0][0], m[1][0]), std::max(m[0][1], m[1][1]));
  if (maxmin_pure == minmax_pure) return maxmin_pure;
  const double denom = m[0][0] - m[0][1] - m[1][0] + m[1][1];
  return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / denom;
}

}  // namespace duel_test

#endif  // DUEL_TESTS_TEST_UTIL_HPP_
