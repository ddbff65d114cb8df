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

#ifndef DUEL_WINNERS_HPP_
#define DUEL_WINNERS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "duel/types.hpp"

namespace duel {

struct GameSolution {
  SimplexDistribution strategy;
  // min over opponents b of sum_a w(a) P(a, b), recomputed on the reported
  // (pruned) strategy; >= -eps_solve on success.
  double certified_margin;
  std::int64_t solver_iterations;
  int support_size;
};

// Maxmin strategy of the skew-symmetric game P via multiplicative-weights
// self-play in doubling epochs, with an exact polish step on detected
// supports. Weights below 1e-9 are pruned from the reported strategy.
// Throws NonConvergence if no strategy certifies within the iteration cap.
GameSolution solve_von_neumann(const PreferenceMatrix& p, double eps_solve,
                               std::int64_t max_iterations = 4'000'000);

// The unique action beating every other action, if one exists.
std::optional<int> find_condorcet(const PreferenceMatrix& p);

struct CopelandScores {
  std::vector<int> strict;  // |{j != i : P(i,j) > 0}|
  std::vector<int> weak;    // |{j : P(i,j) >= 0}|, ties counted, self included
  std::vector<int> net;     // strict minus |{j : P(i,j) < 0}|
};

CopelandScores copeland_scores(const PreferenceMatrix& p);

// score(i) = (1/K) sum_j (P(i,j) + 1) / 2, self-comparison included.
std::vector<double> borda_scores(const PreferenceMatrix& p);

struct RandomWalkResult {
  SimplexDistribution stationary;
  int winner;  // argmax of the stationary distribution, lowest index on ties
};

// Stationary distribution of the column-stochastic chain obtained by
// normalizing each column of P/2 + 0.5; power iteration to 1e-10.
RandomWalkResult random_walk_winner(const PreferenceMatrix& p);

struct WinnerReport {
  std::optional<int> condorcet;
  CopelandScores copeland;
  std::vector<double> borda;
  RandomWalkResult random_walk;
};

WinnerReport winner_report(const PreferenceMatrix& p);

}  // namespace duel

#endif  // DUEL_WINNERS_HPP_
