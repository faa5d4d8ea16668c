// Copyright 2026 The kgbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "kgbench/pipeline/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "kgbench/eval/rag.h"
#include "kgbench/synthesis/items.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/files.h"

namespace kgbench {
namespace {

namespace pt = boost::property_tree;
using nlohmann::json;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"seed", "language", "parallelism"}},
      {"corpus", {"paths"}},
      {"chunk", {"percentile", "max_sentences", "global_threshold"}},
      {"tree",
       {"target_dim", "k_max", "restarts", "membership_floor", "max_levels", "bic_penalty"}},
      {"kg", {"k_threshold", "stoplist", "theta", "counting_unit", "sweep_k"}},
      {"synthesis",
       {"n_options", "max_chains_per_source", "max_chains", "temperature", "difficulty",
        "max_retries"}},
      {"eval", {"context_k", "coarse_pool", "rerank_keep", "models"}},
      {"providers",
       {"chat", "chat_url", "chat_model", "chat_api_key_env", "embedding", "embedding_url",
        "embedding_model", "embedding_api_key_env", "rerank", "rerank_url", "rerank_model",
        "rerank_api_key_env", "timeout_seconds", "embedding_dim", "ensemble", "mock_triplets",
        "mock_leak_rate", "cache_dir"}},
  };
  return keys;
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = Trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> Get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto value = sec->get_optional<std::string>(key);
    if (!value) return std::nullopt;
    return Trim(*value);
  }

  void Long(const std::string& section, const std::string& key, long lo, long hi,
            long& out) const {
    const auto text = Get(section, key);
    if (!text) return;
    long value = 0;
    const auto* end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, value);
    Require(ec == std::errc() && ptr == end,
            Name(section, key) + ": expected an integer, got '" + *text + "'");
    RequireRange(section, key, value >= lo && value <= hi, std::to_string(lo),
                 std::to_string(hi));
    out = value;
  }

  void Int(const std::string& section, const std::string& key, int lo, int hi, int& out) const {
    long value = out;
    Long(section, key, lo, hi, value);
    out = static_cast<int>(value);
  }

  void Double(const std::string& section, const std::string& key, double lo, double hi,
              bool lo_open, double& out) const {
    const auto text = Get(section, key);
    if (!text) return;
    double value = 0;
    size_t used = 0;
    try {
      value = std::stod(*text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    Require(used == text->size() && used > 0 && std::isfinite(value),
            Name(section, key) + ": expected a number, got '" + *text + "'");
    const bool ok = (lo_open ? value > lo : value >= lo) && value <= hi;
    RequireRange(section, key, ok, (lo_open ? "(" : "[") + Format(lo), Format(hi) + "]");
    out = value;
  }

  void Bool(const std::string& section, const std::string& key, bool& out) const {
    const auto text = Get(section, key);
    if (!text) return;
    if (*text == "true" || *text == "1" || *text == "yes") {
      out = true;
    } else if (*text == "false" || *text == "0" || *text == "no") {
      out = false;
    } else {
      Fail(ErrorKind::kValidation, Name(section, key) + ": expected true or false");
    }
  }

  void String(const std::string& section, const std::string& key, std::string& out) const {
    if (auto text = Get(section, key)) out = *text;
  }

  void Choice(const std::string& section, const std::string& key,
              const std::set<std::string>& allowed, std::string& out) const {
    const auto text = Get(section, key);
    if (!text) return;
    if (!allowed.count(*text)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      Fail(ErrorKind::kValidation,
           Name(section, key) + ": '" + *text + "' is not one of " + list);
    }
    out = *text;
  }

  void List(const std::string& section, const std::string& key,
            std::vector<std::string>& out) const {
    const auto text = Get(section, key);
    if (!text) return;
    out = SplitList(*text);
    Require(!out.empty(), Name(section, key) + ": list must not be empty");
  }

  static std::string Name(const std::string& section, const std::string& key) {
    return "[" + section + "] " + key;
  }

 private:
  static std::string Format(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }
  static void RequireRange(const std::string& section, const std::string& key, bool ok,
                           const std::string& lo, const std::string& hi) {
    Require(ok, Name(section, key) + ": value outside " + lo + ", " + hi);
  }

  const pt::ptree& tree_;
};

void CheckKeys(const pt::ptree& tree) {
  const auto& known = KnownKeys();
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    Require(it != known.end(), "config: unknown section [" + section + "]");
    Require(!body.data().size() || body.empty(), "config: key outside a section: " + section);
    for (const auto& [key, value] : body) {
      Require(it->second.count(key) > 0, "config: unknown key " + Reader::Name(section, key));
      Require(value.empty(), "config: nested key " + Reader::Name(section, key));
    }
  }
}

EndpointSettings ReadEndpoint(const Reader& r, const std::string& prefix,
                              const std::set<std::string>& kinds, EndpointSettings e) {
  r.Choice("providers", prefix, kinds, e.kind);
  r.String("providers", prefix + "_url", e.base_url);
  r.String("providers", prefix + "_model", e.model);
  r.String("providers", prefix + "_api_key_env", e.api_key_env);
  r.Double("providers", "timeout_seconds", 0.0, 3600.0, true, e.timeout_seconds);
  Require(e.kind != "http" || !e.base_url.empty(),
          Reader::Name("providers", prefix + "_url") + ": required when " + prefix + " = http");
  return e;
}

json EndpointJson(const EndpointSettings& e) {
  return {{"kind", e.kind},
          {"base_url", e.base_url},
          {"model", e.model},
          {"api_key_env", e.api_key_env},
          {"timeout_seconds", e.timeout_seconds}};
}

}  // namespace

std::filesystem::path PipelineConfig::Resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

PipelineConfig ParsePipelineConfig(const std::string& text,
                                   const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    Fail(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  CheckKeys(tree);
  const Reader r(tree);
  PipelineConfig c;
  c.base_dir = base_dir;

  if (auto seed = r.Get("run", "seed")) {
    uint64_t value = 0;
    const auto* end = seed->data() + seed->size();
    const auto [ptr, ec] = std::from_chars(seed->data(), end, value);
    Require(ec == std::errc() && ptr == end, "[run] seed: expected an unsigned integer");
    c.master_seed = value;
  }
  if (auto lang = r.Get("run", "language")) c.language = ParseLanguage(*lang);
  r.Int("run", "parallelism", 1, 256, c.parallelism);

  r.List("corpus", "paths", c.corpus_paths);

  r.Double("chunk", "percentile", 0.0, 100.0, true, c.chunk_percentile);
  r.Int("chunk", "max_sentences", 1, 100000, c.chunk_max_sentences);
  r.Bool("chunk", "global_threshold", c.chunk_global_threshold);

  r.Int("tree", "target_dim", 1, 4096, c.target_dim);
  r.Int("tree", "k_max", 1, 1000, c.k_max);
  r.Int("tree", "restarts", 1, 100, c.gmm_restarts);
  r.Double("tree", "membership_floor", 0.0, 1.0, false, c.membership_floor);
  r.Int("tree", "max_levels", 1, 32, c.max_levels);
  if (auto penalty = r.Get("tree", "bic_penalty")) c.bic_penalty = ParseBicPenalty(*penalty);

  if (auto k = r.Get("kg", "k_threshold")) c.k_threshold = ParseK(*k);
  r.String("kg", "stoplist", c.stoplist_path);
  if (auto theta = r.Get("kg", "theta")) c.theta = ParseThetaSchedule(*theta);
  if (auto unit = r.Get("kg", "counting_unit")) {
    if (*unit == "tree_nodes") {
      c.counting_unit = CountingUnit::kTreeNodes;
    } else if (*unit == "mentions") {
      c.counting_unit = CountingUnit::kMentions;
    } else {
      Fail(ErrorKind::kValidation, "[kg] counting_unit: expected tree_nodes or mentions");
    }
  }
  if (auto sweep = r.Get("kg", "sweep_k")) {
    c.sweep_k.clear();
    for (const auto& k : SplitList(*sweep)) c.sweep_k.push_back(ParseK(k));
    Require(!c.sweep_k.empty(), "[kg] sweep_k: list must not be empty");
  }

  r.Int("synthesis", "n_options", 3, 26, c.n_options);
  r.Long("synthesis", "max_chains_per_source", 0, 1L << 40, c.max_chains_per_source);
  r.Long("synthesis", "max_chains", 0, 1L << 40, c.max_chains);
  r.Double("synthesis", "temperature", 0.0, 2.0, false, c.temperature);
  r.String("synthesis", "difficulty", c.difficulty);
  ValidateDifficulty(c.difficulty);
  r.Int("synthesis", "max_retries", 0, 20, c.max_retries);

  r.Int("eval", "context_k", 1, 1000, c.retrieval.context_size);
  r.Int("eval", "coarse_pool", 1, 100000, c.retrieval.coarse_pool_size);
  r.Int("eval", "rerank_keep", 1, 100000, c.retrieval.rerank_keep);
  ValidateRetrievalConfig(c.retrieval);
  r.List("eval", "models", c.models);

  c.chat = ReadEndpoint(r, "chat", {"mock", "http"}, c.chat);
  c.embedding = ReadEndpoint(r, "embedding", {"mock", "http"}, c.embedding);
  c.rerank = ReadEndpoint(r, "rerank", {"none", "mock", "http"}, c.rerank);
  r.Int("providers", "embedding_dim", 2, 65536, c.embedding_dim);
  r.List("providers", "ensemble", c.ensemble);
  r.String("providers", "mock_triplets", c.mock_triplets_path);
  r.Double("providers", "mock_leak_rate", 0.0, 1.0, false, c.mock_leak_rate);
  r.String("providers", "cache_dir", c.cache_dir);

  Require(!c.corpus_paths.empty(), "[corpus] paths: at least one path is required");
  Require(c.chat.kind != "mock" || !c.mock_triplets_path.empty(),
          "[providers] mock_triplets: required when chat = mock");
  return c;
}

PipelineConfig LoadPipelineConfig(const std::filesystem::path& path) {
  std::filesystem::path base = std::filesystem::absolute(path).parent_path();
  return ParsePipelineConfig(ReadFile(path), base);
}

json ConfigJson(const PipelineConfig& c) {
  json sweep = json::array();
  for (const auto& k : c.sweep_k) sweep.push_back(FormatK(k));
  return {
      {"run",
       {{"seed", c.master_seed},
        {"language", std::string(LanguageTag(c.language))},
        {"parallelism", c.parallelism}}},
      {"corpus", {{"paths", c.corpus_paths}}},
      {"chunk",
       {{"percentile", c.chunk_percentile},
        {"max_sentences", c.chunk_max_sentences},
        {"global_threshold", c.chunk_global_threshold}}},
      {"tree",
       {{"target_dim", c.target_dim},
        {"k_max", c.k_max},
        {"restarts", c.gmm_restarts},
        {"membership_floor", c.membership_floor},
        {"max_levels", c.max_levels},
        {"bic_penalty", BicPenaltyName(c.bic_penalty)}}},
      {"kg",
       {{"k_threshold", FormatK(c.k_threshold)},
        {"stoplist", c.stoplist_path},
        {"theta", FormatThetaSchedule(c.theta)},
        {"counting_unit",
         c.counting_unit == CountingUnit::kTreeNodes ? "tree_nodes" : "mentions"},
        {"sweep_k", sweep}}},
      {"synthesis",
       {{"n_options", c.n_options},
        {"max_chains_per_source", c.max_chains_per_source},
        {"max_chains", c.max_chains},
        {"temperature", c.temperature},
        {"difficulty", c.difficulty},
        {"max_retries", c.max_retries}}},
      {"eval", {{"retrieval", c.retrieval}, {"models", c.models}}},
      {"providers",
       {{"chat", EndpointJson(c.chat)},
        {"embedding", EndpointJson(c.embedding)},
        {"rerank", EndpointJson(c.rerank)},
        {"embedding_dim", c.embedding_dim},
        {"ensemble", c.ensemble},
        {"mock_triplets", c.mock_triplets_path},
        {"mock_leak_rate", c.mock_leak_rate},
        {"cache_dir", c.cache_dir}}},
  };
}

std::string ConfigDigest(const PipelineConfig& config) {
  return Sha256Hex(ConfigJson(config).dump());
}

}  // namespace kgbench
