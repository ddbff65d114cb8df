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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "duel/io.hpp"
#include "duel/types.hpp"
#include "json.hpp"

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path scratch() {
  static const std::filesystem::path dir = [] {
    const auto d = std::filesystem::temp_directory_path() / "duel_cli_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  const auto out_path = scratch() / "stdout.txt";
  const std::string command = std::string(DUEL_CLI_PATH) + " " + args + " > " +
                              out_path.string() + " 2> " +
                              (scratch() / "stderr.txt").string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  return result;
}

}  // namespace

TEST_CASE("make-env and winners analyze the bundled five-arm example") {
  const std::string env = (scratch() / "appendix.json").string();
  const CliResult made =
      run_cli("make-env --kind appendix_b_5arm --out " + env);
  CHECK(made.exit_code == 0);
  REQUIRE(std::filesystem::exists(env));

  const std::string report_path = (scratch() / "winners.json").string();
  const CliResult ran = run_cli("winners --matrix " + env +
                                " --eps 1e-6 --out " + report_path);
  CHECK(ran.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(report_path));
  CHECK(report.at("condorcet").is_null());
  const std::vector<int> strict =
      report.at("copeland").at("strict").get<std::vector<int>>();
  CHECK(strict == std::vector<int>{2, 2, 2, 3, 1});
  CHECK(report.at("random_walk").at("winner").get<int>() == 3);
  const auto strategy =
      report.at("von_neumann").at("strategy").get<std::vector<double>>();
  REQUIRE(strategy.size() == 5);
  CHECK(std::abs(strategy[0] - 1.0 / 3.0) < 1e-3);
  CHECK(std::abs(strategy[4]) < 1e-6);
}

TEST_CASE("winners finds the condorcet arm when one exists") {
  const std::string env = (scratch() / "cond.json").string();
  REQUIRE(run_cli("make-env --kind condorcet --k 4 --out " + env).exit_code == 0);
  const CliResult ran = run_cli("winners --matrix " + env);
  CHECK(ran.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(ran.out);
  CHECK(report.at("condorcet").get<int>() == 0);
}

TEST_CASE("the explore, train, certify stages chain through files") {
  const std::string env = (scratch() / "chain_env.json").string();
  REQUIRE(run_cli("make-env --kind condorcet --k 3 --out " + env).exit_code == 0);

  const std::string log = (scratch() / "chain_log.jsonl").string();
  CHECK(run_cli("explore --env " + env + " --m 200 --seed 5 --out " + log)
            .exit_code == 0);
  REQUIRE(std::filesystem::exists(log));

  const std::string mixture = (scratch() / "chain_mixture.json").string();
  CHECK(run_cli("train-fpl --env " + env + " --log " + log +
                " --eps 0.3 --seed 5 --out " + mixture)
            .exit_code == 0);
  REQUIRE(std::filesystem::exists(mixture));

  const std::string cert = (scratch() / "chain_cert.json").string();
  const CliResult audited = run_cli("certify --env " + env + " --mixture " +
                                    mixture + " --eps 0.3 --out " + cert);
  CHECK(audited.exit_code == 0);
  const nlohmann::json parsed = nlohmann::json::parse(slurp(cert));
  CHECK(parsed.at("certified").get<bool>());
  CHECK(parsed.at("mode").get<std::string>() == "factored");
}

TEST_CASE("certification failures exit with the audit code") {
  const std::string env = (scratch() / "cycle_env.json").string();
  REQUIRE(run_cli("make-env --kind cycle --k 3 --out " + env).exit_code == 0);
  const std::string mixture = (scratch() / "point_mass.json").string();
  const duel::PolicyMixture point({{1.0, duel::Policy({0}, 3)}});
  duel::write_text_file(mixture, duel::mixture_to_json(point));
  const std::string cert = (scratch() / "failed_certificate.json").string();
  const CliResult audited = run_cli("certify --env " + env + " --mixture " +
                                    mixture + " --eps 0.5 --out " + cert);
  CHECK(audited.exit_code == 3);
}

TEST_CASE("config errors exit with the usage code") {
  CHECK(run_cli("explore --m 10").exit_code == 2);  // missing --env
  CHECK(run_cli("make-env --kind hexagon").exit_code == 2);
  CHECK(run_cli("no-such-command").exit_code == 2);
  const std::string config = (scratch() / "short.json").string();
  duel::write_text_file(config, R"({
    "env": {"kind": "condorcet", "k": 3},
    "class": {"kind": "full_mapping"},
    "algorithm": "fpl",
    "mode": "explore-then-exploit",
    "m": 200,
    "T": 100,
    "epsilon": 0.3,
    "delta": 0.1,
    "seed": 5
  })");
  CHECK(run_cli("run --config " + config).exit_code == 2);
}

TEST_CASE("sparring emits byte-identical transcripts per seed") {
  const std::string env = (scratch() / "spar_env.json").string();
  REQUIRE(run_cli("make-env --kind condorcet --k 3 --out " + env).exit_code == 0);
  const std::string a = (scratch() / "run_a.csv").string();
  const std::string b = (scratch() / "run_b.csv").string();
  CHECK(run_cli("spar-exp4 --env " + env + " --T 300 --seed 4 --out " + a)
            .exit_code == 0);
  CHECK(run_cli("--seed 4 spar-exp4 --env " + env + " --T 300 --out " + b)
            .exit_code == 0);
  const std::string text_a = slurp(a);
  CHECK(text_a == slurp(b));
  CHECK(text_a.find("round,context,a,b,r,cumulative_regret\n") == 0);
}

TEST_CASE("composite env specs build through the spec flag") {
  const std::string spec = (scratch() / "spec.json").string();
  duel::write_text_file(spec, R"({
    "kind": "composite", "q": [0.6, 0.4],
    "components": [{"kind": "condorcet", "k": 2},
                   {"kind": "utility", "utility": [0.9, 0.1]}]
  })");
  const std::string env = (scratch() / "composite.json").string();
  const CliResult made =
      run_cli("make-env --spec " + spec + " --seed 7 --out " + env);
  CHECK(made.exit_code == 0);
  const nlohmann::json parsed = nlohmann::json::parse(slurp(env));
  REQUIRE(parsed.at("contexts").size() == 2);
  CHECK(parsed.at("contexts")[0].at("q").get<double>() == 0.6);
}

TEST_CASE("csv output renders a header and a value row") {
  const std::string env = (scratch() / "csv_env.json").string();
  REQUIRE(run_cli("make-env --kind condorcet --k 3 --out " + env).exit_code == 0);
  const CliResult ran = run_cli("--format csv winners --matrix " + env);
  CHECK(ran.exit_code == 0);
  std::istringstream lines(ran.out);
  std::string header;
  std::string values;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, values));
  CHECK(header.find("condorcet") != std::string::npos);
  CHECK(header.find(',') != std::string::npos);
}

TEST_CASE("the full pipeline runs end to end from a config") {
  const std::string config = (scratch() / "pipeline.json").string();
  duel::write_text_file(config, R"({
    "env": {"kind": "condorcet", "k": 3},
    "class": {"kind": "full_mapping"},
    "algorithm": "pgd",
    "mode": "explore-then-exploit",
    "m": 150,
    "epsilon": 0.4,
    "delta": 0.1,
    "seed": 2
  })");
  const std::string out_dir = (scratch() / "pipeline_out").string();
  const CliResult ran =
      run_cli("--out-dir " + out_dir + " run --config " + config);
  CHECK(ran.exit_code == 0);
  for (const char* leaf : {"env.json", "log.jsonl", "mixture.json",
                           "certificate.json", "regret.csv"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / leaf));
  }
}
