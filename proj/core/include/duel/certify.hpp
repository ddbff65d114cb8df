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

#ifndef DUEL_CERTIFY_HPP_
#define DUEL_CERTIFY_HPP_

#include <cstdint>
#include <string>

#include "duel/env.hpp"
#include "duel/types.hpp"

namespace duel {

// Exact audit of a candidate mixture against the true meta-game: the margin
// is min over pure column policies rho of sum_pi w(pi) M(pi, rho), computed
// by enumerating the class. An epsilon-approximate winner has margin
// >= -epsilon.
struct Certificate {
  double margin = 0.0;
  double epsilon = 0.0;
  bool certified = false;
  std::string mode = "enumerated";
  std::int64_t class_count = 0;
  Policy worst_policy{{0}, 1};
};

Certificate certify(const ContextualEnvironment& env,
                    const PolicyClass& policy_class,
                    const PolicyMixture& mixture, double epsilon,
                    std::int64_t cap = 10'000);

}  // namespace duel

#endif  // DUEL_CERTIFY_HPP_
