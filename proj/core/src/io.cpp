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

#include "duel/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "duel/error.hpp"
#include "json.hpp"

namespace duel {
namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void append_int_array(std::string& out, const std::vector<int>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  out += ']';
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("write failed for " + path);
}

std::string env_to_json(const ContextualEnvironment& env) {
  std::string out = "{\"contexts\":[";
  const auto& entries = env.entries();
  for (std::size_t s = 0; s < entries.size(); ++s) {
    if (s > 0) out += ',';
    out += "{\"q\":";
    out += format_g17(entries[s].q);
    out += ",\"matrix\":[";
    const int k = entries[s].matrix.k();
    for (int a = 0; a < k; ++a) {
      if (a > 0) out += ',';
      out += '[';
      for (int b = 0; b < k; ++b) {
        if (b > 0) out += ',';
        out += format_g17(entries[s].matrix.entry(a, b));
      }
      out += ']';
    }
    out += "]}";
  }
  out += "],\"seed\":";
  out += std::to_string(env.seed());
  out += "}\n";
  return out;
}

ContextualEnvironment env_from_json(const std::string& text) {
  const json j = parse_or_throw(text, "environment file");
  try {
    std::vector<ContextEntry> entries;
    for (const json& c : j.at("contexts")) {
      const double q = c.at("q").get<double>();
      const auto rows = c.at("matrix").get<std::vector<std::vector<double>>>();
      entries.push_back(ContextEntry{q, validate_preference_matrix(rows)});
    }
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    return ContextualEnvironment(std::move(entries), seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("environment file: ") + e.what());
  }
}

std::string mixture_to_json(const PolicyMixture& mixture,
                            const std::map<std::string, std::string>& report) {
  std::string out = "{\"atoms\":[";
  const auto& atoms = mixture.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ',';
    out += "{\"weight\":";
    out += format_g17(atoms[i].weight);
    out += ",\"policy\":";
    append_int_array(out, atoms[i].policy.actions());
    out += '}';
  }
  out += "],\"report\":{";
  bool first = true;
  for (const auto& [key, value] : report) {
    if (!first) out += ',';
    first = false;
    out += '"';
    out += json_escape(key);
    out += "\":";
    out += value;
  }
  out += "}}\n";
  return out;
}

PolicyMixture mixture_from_json(const std::string& text, int k) {
  const json j = parse_or_throw(text, "mixture file");
  try {
    std::vector<MixtureAtom> atoms;
    for (const json& a : j.at("atoms")) {
      const double weight = a.at("weight").get<double>();
      const auto actions = a.at("policy").get<std::vector<int>>();
      atoms.push_back(MixtureAtom{weight, Policy(actions, k)});
    }
    return PolicyMixture(std::move(atoms));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mixture file: ") + e.what());
  }
}

std::string certificate_to_json(const Certificate& cert) {
  std::string out = "{\"margin\":";
  out += format_g17(cert.margin);
  out += ",\"epsilon\":";
  out += format_g17(cert.epsilon);
  out += ",\"certified\":";
  out += cert.certified ? "true" : "false";
  out += ",\"mode\":\"";
  out += json_escape(cert.mode);
  out += "\",\"class_count\":";
  out += std::to_string(cert.class_count);
  out += ",\"worst_policy\":";
  append_int_array(out, cert.worst_policy.actions());
  out += "}\n";
  return out;
}

std::string log_to_jsonl(const ExplorationLog& log) {
  std::string out;
  for (const DuelRecord& rec : log.records) {
    out += "{\"i\":";
    out += std::to_string(rec.round);
    out += ",\"context\":";
    out += std::to_string(rec.context);
    out += ",\"a\":";
    out += std::to_string(rec.a);
    out += ",\"b\":";
    out += std::to_string(rec.b);
    out += ",\"r\":";
    out += std::to_string(rec.r);
    out += "}\n";
  }
  return out;
}

ExplorationLog log_from_jsonl(const std::string& text, int k, int contexts) {
  if (k < 1 || contexts < 1) throw BadParams("log shape must be positive");
  ExplorationLog log;
  log.k = k;
  log.contexts = contexts;
  log.l_bound = static_cast<double>(k) * k;
  log.v_bound = log.l_bound;
  std::istringstream lines(text);
  std::string line;
  std::int64_t expected = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const json j = parse_or_throw(line, "log line");
    try {
      DuelRecord rec;
      rec.round = j.at("i").get<std::int64_t>();
      rec.context = j.at("context").get<int>();
      rec.a = j.at("a").get<int>();
      rec.b = j.at("b").get<int>();
      rec.r = j.at("r").get<int>();
      if (rec.round != expected) {
        throw ConfigError("log rows must be indexed 0..m-1 in order");
      }
      if (rec.context < 0 || rec.context >= contexts) {
        throw ConfigError("log record context out of range");
      }
      if (rec.a < 0 || rec.a >= k || rec.b < 0 || rec.b >= k) {
        throw ConfigError("log record arm out of range");
      }
      if (rec.r != 1 && rec.r != -1) {
        throw ConfigError("log record outcome must be +1 or -1");
      }
      ++expected;
      log.records.push_back(rec);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("log line: ") + e.what());
    }
  }
  if (log.records.empty()) throw ConfigError("log holds no records");
  log.m = static_cast<int>(log.records.size());
  return log;
}

std::string regret_to_csv(const std::vector<DuelRecord>& transcript,
                          const std::vector<double>& cumulative_regret) {
  if (transcript.size() != cumulative_regret.size()) {
    throw DimensionMismatch("transcript and regret lengths differ");
  }
  std::string out = "round,context,a,b,r,cumulative_regret\n";
  for (std::size_t t = 0; t < transcript.size(); ++t) {
    const DuelRecord& rec = transcript[t];
    out += std::to_string(rec.round);
    out += ',';
    out += std::to_string(rec.context);
    out += ',';
    out += std::to_string(rec.a);
    out += ',';
    out += std::to_string(rec.b);
    out += ',';
    out += std::to_string(rec.r);
    out += ',';
    out += format_g17(cumulative_regret[t]);
    out += '\n';
  }
  return out;
}

}  // namespace duel
