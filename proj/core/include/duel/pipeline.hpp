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

#ifndef DUEL_PIPELINE_HPP_
#define DUEL_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "duel/certify.hpp"
#include "duel/env.hpp"
#include "duel/types.hpp"

namespace duel {

struct PolicyClassSpec {
  std::string kind;  // "full_mapping" | "tabular"
  std::vector<std::vector<int>> policies;
};

PolicyClass make_policy_class(const PolicyClassSpec& spec, int k, int contexts);

EnvSpec parse_env_spec(const std::string& text);
PolicyClassSpec parse_class_spec(const std::string& text);

// algorithm: spar-exp4 runs T sparring rounds and averages the row player.
// fpl and pgd explore uniformly for m rounds, solve the estimated game, and
// exploit for the remaining T - m rounds by sampling both duel slots from
// the solved mixture. mode full-explore-exploit derives
// m = ceil(K^(2/3) T^(2/3) Psi^(1/3)) with Psi = ln(|Pi| / delta);
// explore-then-exploit takes m from the config (T defaults to m).
struct ExperimentConfig {
  bool has_env_spec = false;
  EnvSpec env;
  std::string env_file;
  PolicyClassSpec class_spec;
  std::string algorithm;  // "spar-exp4" | "fpl" | "pgd"
  std::string mode = "full-explore-exploit";
  std::int64_t horizon = 0;  // T
  int m = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::int64_t cap = 10'000;
};

ExperimentConfig parse_experiment_config(const std::string& text);

int exploration_budget(const ExperimentConfig& config, double log_class_size,
                       int k);

struct PipelineResult {
  Certificate certificate{};
  std::map<std::string, std::string> report;
  std::string env_path;
  std::string log_path;
  std::string mixture_path;
  std::string certificate_path;
  std::string regret_path;
};

// Writes env.json, log.jsonl, mixture.json, certificate.json, and regret.csv
// under out_dir. Never fails on an uncertified mixture; the caller inspects
// certificate.certified.
PipelineResult run_pipeline(const ExperimentConfig& config,
                            const std::string& out_dir);

}  // namespace duel

#endif  // DUEL_PIPELINE_HPP_
