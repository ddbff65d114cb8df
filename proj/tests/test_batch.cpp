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
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "duel/batch.hpp"
#include "duel/env.hpp"
#include "duel/error.hpp"
#include "test_util.hpp"

using duel::BlockGame;
using duel::ExplorationLog;
using duel::Policy;
using duel::PolicyClass;

namespace {

ExplorationLog small_log() {
  const auto env = duel_test::single_context("condorcet", 3);
  return duel::explore_uniform(env, 64, 17);
}

std::vector<double> random_vector(std::size_t n, duel::Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.next_unit() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("uniform exploration logs are well-formed and reproducible") {
  const auto env = duel_test::single_context("appendix_b_5arm", 5);
  const ExplorationLog log = duel::explore_uniform(env, 200, 5);
  CHECK(log.m == 200);
  CHECK(log.k == 5);
  CHECK(log.contexts == 1);
  CHECK(log.l_bound == 25.0);
  CHECK(log.v_bound == 25.0);
  REQUIRE(log.records.size() == 200);
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const duel::DuelRecord& rec = log.records[i];
    CHECK(rec.round == static_cast<std::int64_t>(i));
    CHECK(rec.context == 0);
    CHECK((rec.a >= 0 && rec.a < 5));
    CHECK((rec.b >= 0 && rec.b < 5));
    CHECK((rec.r == 1 || rec.r == -1));
  }

  duel::Rng stream = duel::Rng::stream(5, duel::streams::kExplore);
  const ExplorationLog manual = duel::explore_uniform(env, 200, stream);
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    CHECK(manual.records[i].a == log.records[i].a);
    CHECK(manual.records[i].b == log.records[i].b);
    CHECK(manual.records[i].r == log.records[i].r);
  }
  CHECK_THROWS_AS(duel::explore_uniform(env, 0, 5), duel::BadParams);
}

TEST_CASE("pair frequencies are uniform over all ordered pairs") {
  const auto env = duel_test::single_context("cycle", 2);
  const ExplorationLog log = duel::explore_uniform(env, 20000, 9);
  std::vector<int> counts(4, 0);
  for (const duel::DuelRecord& rec : log.records) ++counts[rec.a * 2 + rec.b];
  const double expected = 5000.0;
  const double sigma = std::sqrt(20000.0 * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - expected) < 5.0 * sigma);
}

TEST_CASE("estimator blocks hold the single scaled entry") {
  const ExplorationLog log = small_log();
  const BlockGame game = duel::estimator_blocks(log);
  CHECK(game.m == log.m);
  CHECK(game.k == log.k);
  CHECK(game.contexts == 1);
  REQUIRE(game.blocks.size() == log.records.size());
  REQUIRE(game.record_context.size() == log.records.size());
  for (std::size_t i = 0; i < game.blocks.size(); ++i) {
    CHECK(game.blocks[i].a == log.records[i].a);
    CHECK(game.blocks[i].b == log.records[i].b);
    CHECK(game.blocks[i].value == 9.0 * log.records[i].r);
    CHECK(game.record_context[i] == log.records[i].context);
  }
}

TEST_CASE("estimator construction rejects corrupt logs") {
  ExplorationLog log = small_log();
  log.records[3].r = 0;
  CHECK_THROWS_AS(duel::estimator_blocks(log), duel::RangeViolation);
  log = small_log();
  log.records[3].a = 7;
  CHECK_THROWS_AS(duel::estimator_blocks(log), duel::DimensionMismatch);
  log = small_log();
  log.records[3].context = 2;
  CHECK_THROWS_AS(duel::estimator_blocks(log), duel::DimensionMismatch);
  log = small_log();
  log.m = 10;
  CHECK_THROWS_AS(duel::estimator_blocks(log), duel::DimensionMismatch);
}

TEST_CASE("policy vectors put 1/sqrt(m) on the chosen arms") {
  const ExplorationLog log = small_log();
  const BlockGame game = duel::estimator_blocks(log);
  const Policy pi({2}, 3);
  const std::vector<double> v = duel::policy_vector(game, pi);
  REQUIRE(v.size() == static_cast<std::size_t>(game.m) * 3);
  const double scale = 1.0 / std::sqrt(static_cast<double>(game.m));
  double norm_sq = 0.0;
  for (int i = 0; i < game.m; ++i) {
    for (int a = 0; a < 3; ++a) {
      const double want = (a == 2) ? scale : 0.0;
      CHECK(v[static_cast<std::size_t>(i) * 3 + a] == want);
    }
    norm_sq += scale * scale;
  }
  CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(duel::policy_vector(game, Policy({1}, 4)),
                  duel::DimensionMismatch);
}

TEST_CASE("apply_B and apply_Bt are adjoint") {
  const BlockGame game = duel::estimator_blocks(small_log());
  duel::Rng rng(23);
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> u = random_vector(dim, rng);
    const std::vector<double> w = random_vector(dim, rng);
    const double lhs = duel_test::dot(w, duel::apply_B(game, u));
    const double rhs = duel_test::dot(duel::apply_Bt(game, w), u);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  CHECK_THROWS_AS(duel::apply_B(game, std::vector<double>(dim + 1, 0.0)),
                  duel::DimensionMismatch);
}

TEST_CASE("the three estimate readings agree exactly") {
  const ExplorationLog log = small_log();
  const BlockGame game = duel::estimator_blocks(log);
  const PolicyClass cls = PolicyClass::full_mapping(1, 3);
  const std::int64_t count = cls.enumeration_count(100);
  for (std::int64_t i = 0; i < count; ++i) {
    for (std::int64_t j = 0; j < count; ++j) {
      const Policy row = cls.policy_at(i);
      const Policy col = cls.policy_at(j);
      const double via_game = duel::mhat_entry(game, row, col);
      const double via_log = duel::mhat_entry(log, row, col);
      const std::vector<double> vr = duel::policy_vector(game, row);
      const std::vector<double> vc = duel::policy_vector(game, col);
      const double quadratic = duel_test::dot(vr, duel::apply_B(game, vc));
      CHECK(via_game == via_log);
      CHECK(via_game == doctest::Approx(quadratic).epsilon(1e-12));
    }
  }
  const auto matrix = duel::mhat_matrix(game, cls);
  REQUIRE(matrix.size() == 3);
  CHECK(matrix[0][1] ==
        duel::mhat_entry(game, cls.policy_at(0), cls.policy_at(1)));
}

TEST_CASE("sample means estimate the true preference") {
  const auto env = duel_test::single_context("condorcet", 3);
  const ExplorationLog log = duel::explore_uniform(env, 40000, 77);
  const BlockGame game = duel::estimator_blocks(log);
  const double estimate =
      duel::mhat_entry(game, Policy({0}, 3), Policy({1}, 3));
  const double truth = 0.5;
  const double variance = 9.0 - truth * truth;
  const double sigma = std::sqrt(variance / 40000.0);
  CHECK(std::abs(estimate - truth) < 5.0 * sigma);
}

TEST_CASE("the deviation bound matches its closed form") {
  const double eps = duel::bernstein_epsilon(4000, 3, std::log(3.0), 0.1);
  CHECK(eps == doctest::Approx(0.14979916808332605).epsilon(1e-12));
  CHECK(duel::bernstein_epsilon(16000, 3, std::log(3.0), 0.1) < eps);
  CHECK(duel::bernstein_epsilon(4000, 3, std::log(30.0), 0.1) > eps);
  CHECK(duel::bernstein_epsilon(4000, 3, std::log(3.0), 0.01) > eps);
  CHECK_THROWS_AS(duel::bernstein_epsilon(0, 3, 1.0, 0.1), duel::BadParams);
  CHECK_THROWS_AS(duel::bernstein_epsilon(10, 3, 1.0, 1.5), duel::BadParams);
}

TEST_CASE("both oracles minimize over the class and agree") {
  const duel::EnvSpec cond{.kind = "condorcet", .k = 3};
  duel::EnvSpec spec;
  spec.kind = "composite";
  spec.q = {0.5, 0.5};
  spec.components = {cond, cond};
  const auto env = duel::make_environment(spec, 3);
  const ExplorationLog log = duel::explore_uniform(env, 32, 2);
  const BlockGame game = duel::estimator_blocks(log);
  const PolicyClass cls = PolicyClass::full_mapping(2, 3);

  duel::EnumerationOracle enumerated(game, cls);
  duel::FactoredOracle factored(game, cls);
  duel::Rng rng(41);
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> cost = random_vector(dim, rng);
    const Policy pe = enumerated.argmin(cost);
    const Policy pf = factored.argmin(cost);
    CHECK(pe.action(0) == pf.action(0));
    CHECK(pe.action(1) == pf.action(1));
    const double best =
        duel_test::dot(cost, duel::policy_vector(game, pe));
    for (std::int64_t j = 0; j < cls.enumeration_count(100); ++j) {
      const double other =
          duel_test::dot(cost, duel::policy_vector(game, cls.policy_at(j)));
      CHECK(best <= other + 1e-12);
    }
  }
  CHECK(enumerated.calls() == 20);
  CHECK(factored.calls() == 20);
}

TEST_CASE("oracle ties resolve to the lowest index") {
  const BlockGame game = duel::estimator_blocks(small_log());
  const PolicyClass cls = PolicyClass::full_mapping(1, 3);
  duel::EnumerationOracle enumerated(game, cls);
  duel::FactoredOracle factored(game, cls);
  const std::vector<std::vector<double>> zero(1, std::vector<double>(3, 0.0));
  CHECK(enumerated.argmin_aggregated(zero).action(0) == 0);
  CHECK(factored.argmin_aggregated(zero).action(0) == 0);
  const std::vector<std::vector<double>> tie{{1.0, 0.0, 0.0}};
  CHECK(enumerated.argmin_aggregated(tie).action(0) == 1);
  CHECK(factored.argmin_aggregated(tie).action(0) == 1);
  CHECK(enumerated.calls() == 2);
}

TEST_CASE("aggregated and dense cost entry points agree") {
  const ExplorationLog log = small_log();
  const BlockGame game = duel::estimator_blocks(log);
  const PolicyClass cls = PolicyClass::full_mapping(1, 3);
  duel::FactoredOracle oracle(game, cls);
  duel::Rng rng(6);
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  const std::vector<double> cost = random_vector(dim, rng);
  std::vector<std::vector<double>> agg(1, std::vector<double>(3, 0.0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(game.m));
  for (int i = 0; i < game.m; ++i) {
    for (int a = 0; a < 3; ++a) {
      agg[0][a] += cost[static_cast<std::size_t>(i) * 3 + a] * scale;
    }
  }
  const Policy dense = oracle.argmin(cost);
  const Policy grouped = oracle.argmin_aggregated(agg);
  CHECK(dense.action(0) == grouped.action(0));
  CHECK(oracle.calls() == 2);
}

TEST_CASE("make_oracle dispatches on the class kind") {
  const BlockGame game = duel::estimator_blocks(small_log());
  const PolicyClass factored_cls = PolicyClass::full_mapping(1, 3);
  const PolicyClass tabular_cls =
      PolicyClass::tabular(3, {Policy({0}, 3), Policy({2}, 3)});
  auto a = duel::make_oracle(game, factored_cls);
  auto b = duel::make_oracle(game, tabular_cls);
  CHECK(dynamic_cast<duel::FactoredOracle*>(a.get()) != nullptr);
  CHECK(dynamic_cast<duel::EnumerationOracle*>(b.get()) != nullptr);
  CHECK_THROWS_AS(duel::FactoredOracle(game, tabular_cls), duel::BadParams);
}

TEST_CASE("one-shot oracle helpers return the policy embedding") {
  const BlockGame game = duel::estimator_blocks(small_log());
  const PolicyClass cls = PolicyClass::full_mapping(1, 3);
  duel::Rng rng(13);
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  const std::vector<double> cost = random_vector(dim, rng);
  const auto [pe, ve] = duel::oracle_enumerate(game, cls, cost);
  const auto [pf, vf] = duel::oracle_factored(game, cls, cost);
  CHECK(pe.action(0) == pf.action(0));
  const std::vector<double> expected = duel::policy_vector(game, pe);
  REQUIRE(ve.size() == expected.size());
  for (std::size_t i = 0; i < ve.size(); ++i) {
    CHECK(ve[i] == expected[i]);
    CHECK(vf[i] == expected[i]);
  }
}
