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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "duel/batch.hpp"
#include "duel/env.hpp"
#include "duel/error.hpp"
#include "duel/solvers.hpp"
#include "test_util.hpp"

using duel::BlockGame;
using duel::ExplorationLog;
using duel::HullPoint;
using duel::Policy;
using duel::PolicyClass;

namespace {

BlockGame condorcet_game(int m, std::uint64_t seed) {
  const auto env = duel_test::single_context("condorcet", 2);
  return duel::estimator_blocks(duel::explore_uniform(env, m, seed));
}

PolicyClass two_arms() {
  return PolicyClass::tabular(2, {Policy({0}, 2), Policy({1}, 2)});
}

BlockGame zero_game(int m, int k) {
  BlockGame game;
  game.m = m;
  game.k = k;
  game.contexts = 1;
  game.record_context.assign(m, 0);
  game.blocks.assign(m, duel::EstimatorBlock{0, 1, 0.0});
  return game;
}

void check_in_hull(const BlockGame& game, const HullPoint& point) {
  REQUIRE(point.marginal.size() == static_cast<std::size_t>(game.contexts));
  for (const auto& row : point.marginal) {
    double sum = 0.0;
    for (double v : row) {
      CHECK(v >= -1e-12);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(game.m));
  REQUIRE(point.dense.size() == static_cast<std::size_t>(game.m) * game.k);
  for (int i = 0; i < game.m; ++i) {
    const int s = game.record_context[i];
    for (int a = 0; a < game.k; ++a) {
      CHECK(point.dense[static_cast<std::size_t>(i) * game.k + a] ==
            doctest::Approx(point.marginal[s][a] * scale).epsilon(1e-12));
    }
  }
}

}  // namespace

TEST_CASE("hull vertices embed policies one-hot") {
  const BlockGame game = condorcet_game(16, 1);
  const HullPoint vertex = duel::hull_vertex(game, Policy({1}, 2));
  check_in_hull(game, vertex);
  REQUIRE(vertex.atoms.size() == 1);
  CHECK(vertex.atoms[0].weight == 1.0);
  CHECK(vertex.marginal[0][1] == 1.0);
  const std::vector<double> direct = duel::policy_vector(game, Policy({1}, 2));
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(vertex.dense[i] == direct[i]);
  }
}

TEST_CASE("hull points combine vertices convexly") {
  const BlockGame game = condorcet_game(16, 1);
  const std::vector<duel::MixtureAtom> atoms{
      {0.25, Policy({0}, 2)}, {0.75, Policy({1}, 2)}};
  const HullPoint point = duel::hull_from_atoms(game, atoms);
  check_in_hull(game, point);
  const std::vector<double> v0 = duel::policy_vector(game, Policy({0}, 2));
  const std::vector<double> v1 = duel::policy_vector(game, Policy({1}, 2));
  for (std::size_t i = 0; i < point.dense.size(); ++i) {
    CHECK(point.dense[i] ==
          doctest::Approx(0.25 * v0[i] + 0.75 * v1[i]).epsilon(1e-12));
  }
}

TEST_CASE("guarantee round counts and step sizes match their formulas") {
  CHECK(duel::guarantee_rounds(1.0, 0.25) == 576);
  CHECK(duel::guarantee_rounds(2.0, 0.25) == 2304);
  CHECK(duel::guarantee_rounds(1.0, 0.5) == 144);
  CHECK_THROWS_AS(duel::guarantee_rounds(1.0, 0.0), duel::BadParams);
  CHECK_THROWS_AS(duel::guarantee_rounds(0.0, 0.25), duel::BadParams);

  CHECK(duel::fpl_alpha(2.0, 50) ==
        doctest::Approx(std::sqrt(2.0 / (4.0 * 50.0))).epsilon(1e-15));
  CHECK(duel::fpl_gamma(2.0, 16, 4096, 0.1) ==
        doctest::Approx(2.0 * 2.0 * std::sqrt(2.0 * 16.0 / 4096.0) +
                        2.0 * 2.0 * std::sqrt(2.0 * std::log(20.0) / 4096.0))
            .epsilon(1e-15));
  CHECK(duel::pgd_eta(2.0, 64) ==
        doctest::Approx(2.0 / (2.0 * 8.0)).epsilon(1e-15));
  CHECK(duel::pgd_epsilon(2.0, 64, 16) ==
        doctest::Approx(2.0 * 2.0 / 8.0 + 2.0 * (8.0 / 4.0) / 2.0)
            .epsilon(1e-15));
}

TEST_CASE("the empirical scale is the clamped max estimate") {
  const BlockGame game = condorcet_game(64, 3);
  const PolicyClass cls = PolicyClass::full_mapping(1, 2);
  const auto mhat = duel::mhat_matrix(game, cls);
  double max_abs = 0.0;
  for (const auto& row : mhat) {
    for (double v : row) max_abs = std::max(max_abs, std::abs(v));
  }
  CHECK(duel::empirical_l(game, cls) == std::max(1.0, max_abs));
  CHECK(duel::empirical_l(zero_game(4, 2), cls) == 1.0);
}

TEST_CASE("perturbed-leader sparring spends exactly two calls per round") {
  const BlockGame game = condorcet_game(16, 4);
  const PolicyClass cls = two_arms();
  auto oracle = duel::make_oracle(game, cls);
  const double l_bound = duel::empirical_l(game, cls);
  const duel::FplResult result =
      duel::sparring_fpl(game, *oracle, 128, l_bound, 0.1, 9);
  CHECK(result.report.oracle_calls == 256);
  CHECK(oracle->calls() == 256);
  CHECK(result.report.rounds == 128);
  CHECK(result.report.step ==
        doctest::Approx(duel::fpl_alpha(l_bound, 128)).epsilon(1e-15));
  CHECK(result.report.guarantee ==
        doctest::Approx(duel::fpl_gamma(l_bound, 16, 128, 0.1)).epsilon(1e-15));
  CHECK(result.row_mixture.size() <= 2);
  double total = 0.0;
  for (const duel::MixtureAtom& atom : result.row_mixture.atoms()) {
    total += atom.weight;
    CHECK(atom.weight * 128.0 ==
          doctest::Approx(std::round(atom.weight * 128.0)).epsilon(1e-9));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  auto oracle2 = duel::make_oracle(game, cls);
  const duel::FplResult again =
      duel::sparring_fpl(game, *oracle2, 128, l_bound, 0.1, 9);
  REQUIRE(again.row_mixture.size() == result.row_mixture.size());
  for (int i = 0; i < result.row_mixture.size(); ++i) {
    CHECK(again.row_mixture.atoms()[i].weight ==
          result.row_mixture.atoms()[i].weight);
    CHECK(again.row_mixture.atoms()[i].policy ==
          result.row_mixture.atoms()[i].policy);
  }
}

TEST_CASE("a singleton class forces a point-mass mixture") {
  const BlockGame game = condorcet_game(16, 4);
  const PolicyClass cls = PolicyClass::tabular(2, {Policy({1}, 2)});
  auto oracle = duel::make_oracle(game, cls);
  const duel::FplResult result =
      duel::sparring_fpl(game, *oracle, 32, 1.0, 0.1, 2);
  REQUIRE(result.row_mixture.size() == 1);
  CHECK(result.row_mixture.atoms()[0].weight == doctest::Approx(1.0));
  CHECK(result.row_mixture.atoms()[0].policy == Policy({1}, 2));
  REQUIRE(result.col_mixture.size() == 1);
}

TEST_CASE("perturbed-leader margins meet the deviation guarantee") {
  const PolicyClass cls = two_arms();
  const BlockGame game = condorcet_game(16, 11);
  const auto mhat = duel::mhat_matrix(game, cls);
  const double l_bound = duel::empirical_l(game, cls);
  const double maxmin = duel_test::maxmin_2x2(mhat);
  const std::int64_t n = 4096;
  const double gamma = duel::fpl_gamma(l_bound, 16, n, 0.1);
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto oracle = duel::make_oracle(game, cls);
    const duel::FplResult result =
        duel::sparring_fpl(game, *oracle, n, l_bound, 0.1, seed);
    const double margin =
        duel_test::mixture_margin_on(mhat, result.row_mixture, cls);
    if (margin < maxmin - 2.0 * gamma - 1e-9) ++failures;
  }
  CHECK(failures <= 1);
}

TEST_CASE("descent margins meet the deterministic guarantee") {
  const PolicyClass cls = two_arms();
  const std::int64_t n = 576;
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BlockGame game = condorcet_game(16, 100 + seed);
    const auto mhat = duel::mhat_matrix(game, cls);
    const double l_bound = duel::empirical_l(game, cls);
    auto oracle = duel::make_oracle(game, cls);
    const duel::PgdResult result =
        duel::projected_gd(game, *oracle, n, n, l_bound);
    const double eps = duel::pgd_epsilon(l_bound, n, n);
    CHECK(result.report.guarantee == doctest::Approx(eps).epsilon(1e-15));
    const double margin =
        duel_test::mixture_margin_on(mhat, result.mixture, cls);
    const double maxmin = duel_test::maxmin_2x2(mhat);
    if (margin < maxmin - eps - 1e-9) ++failures;
  }
  CHECK(failures <= 1);
}

TEST_CASE("descent spends one call per inner step plus overhead") {
  const BlockGame game = condorcet_game(16, 7);
  const PolicyClass cls = two_arms();
  auto oracle = duel::make_oracle(game, cls);
  const duel::PgdResult result = duel::projected_gd(game, *oracle, 8, 4, 2.0);
  CHECK(result.report.oracle_calls == 8 * (1 + 4) + 1);
  CHECK(oracle->calls() == result.report.oracle_calls);
  CHECK(result.report.rounds == 8);
  CHECK(result.report.inner_rounds == 4);
}

TEST_CASE("a zero game leaves descent at its starting vertex") {
  const BlockGame game = zero_game(8, 2);
  const PolicyClass cls = PolicyClass::full_mapping(1, 2);
  auto oracle = duel::make_oracle(game, cls);
  const duel::PgdResult result = duel::projected_gd(game, *oracle, 16, 8, 1.0);
  CHECK(result.report.oracle_calls == 16 + 1);
  REQUIRE(result.mixture.size() == 1);
  CHECK(result.mixture.atoms()[0].weight == doctest::Approx(1.0));
  CHECK(result.mixture.atoms()[0].policy == Policy({0}, 2));
}

TEST_CASE("projection returns the start when the target is the start") {
  const BlockGame game = condorcet_game(8, 3);
  const PolicyClass cls = PolicyClass::full_mapping(1, 2);
  auto oracle = duel::make_oracle(game, cls);
  const HullPoint start = duel::hull_vertex(game, Policy({0}, 2));
  const HullPoint back =
      duel::approx_project(game, *oracle, start.dense, start, 64);
  CHECK(oracle->calls() == 0);
  REQUIRE(back.atoms.size() == 1);
  CHECK(back.atoms[0].policy == Policy({0}, 2));
  CHECK(back.atoms[0].weight == 1.0);
}

TEST_CASE("projection lands in the hull near the target") {
  const BlockGame game = condorcet_game(4, 6);
  const PolicyClass cls = PolicyClass::full_mapping(1, 2);
  auto oracle = duel::make_oracle(game, cls);
  const HullPoint start = duel::hull_vertex(game, Policy({0}, 2));
  duel::Rng rng(55);
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  const std::int64_t n_inner = 4096;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> z(dim);
    for (double& v : z) v = 2.0 * rng.next_unit() - 1.0;
    const HullPoint vbar =
        duel::approx_project(game, *oracle, z, start, n_inner);
    check_in_hull(game, vbar);
    const double slack = (8.0 / std::sqrt(static_cast<double>(n_inner))) *
                         duel_test::l2_dist(start.dense, z);
    const double achieved = duel_test::l2_dist(vbar.dense, z);
    for (std::int64_t j = 0; j < 2; ++j) {
      const HullPoint vertex = duel::hull_vertex(game, cls.policy_at(j));
      const double at_vertex = duel_test::l2_dist(vertex.dense, z);
      CHECK(achieved * achieved <=
            at_vertex * at_vertex + slack + 1e-9);
    }
  }
}

TEST_CASE("solver parameter validation rejects nonsense") {
  const BlockGame game = condorcet_game(8, 3);
  const PolicyClass cls = two_arms();
  auto oracle = duel::make_oracle(game, cls);
  CHECK_THROWS_AS(duel::sparring_fpl(game, *oracle, 0, 1.0, 0.1, 1),
                  duel::BadParams);
  CHECK_THROWS_AS(duel::sparring_fpl(game, *oracle, 8, -1.0, 0.1, 1),
                  duel::BadParams);
  CHECK_THROWS_AS(duel::sparring_fpl(game, *oracle, 8, 1.0, 1.5, 1),
                  duel::BadParams);
  CHECK_THROWS_AS(duel::projected_gd(game, *oracle, 0, 4, 1.0),
                  duel::BadParams);
  CHECK_THROWS_AS(duel::projected_gd(game, *oracle, 4, 0, 1.0),
                  duel::BadParams);
  const HullPoint start = duel::hull_vertex(game, Policy({0}, 2));
  CHECK_THROWS_AS(
      duel::approx_project(game, *oracle, start.dense, start, 0),
      duel::BadParams);
}
