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

#ifndef DUEL_IO_HPP_
#define DUEL_IO_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "duel/batch.hpp"
#include "duel/certify.hpp"
#include "duel/env.hpp"
#include "duel/types.hpp"

namespace duel {

// 17 significant digits round-trip any 64-bit float exactly.
std::string format_g17(double v);

std::string json_escape(const std::string& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// {"contexts":[{"q":...,"matrix":[[...],...]},...],"seed":N}
std::string env_to_json(const ContextualEnvironment& env);
ContextualEnvironment env_from_json(const std::string& text);

// {"atoms":[{"weight":...,"policy":[...]},...],"report":{...}}
// Report values are preformatted JSON fragments; map order fixes the byte
// layout.
std::string mixture_to_json(const PolicyMixture& mixture,
                            const std::map<std::string, std::string>& report = {});
PolicyMixture mixture_from_json(const std::string& text, int k);

std::string certificate_to_json(const Certificate& cert);

// One record per line: {"i":N,"context":N,"a":N,"b":N,"r":N}
std::string log_to_jsonl(const ExplorationLog& log);
// The log format carries no dimensions, so the environment's shape is
// supplied; rows must be indexed 0..m-1 in order.
ExplorationLog log_from_jsonl(const std::string& text, int k, int contexts);

// Header round,context,a,b,r,cumulative_regret; LF endings.
std::string regret_to_csv(const std::vector<DuelRecord>& transcript,
                          const std::vector<double>& cumulative_regret);

}  // namespace duel

#endif  // DUEL_IO_HPP_
