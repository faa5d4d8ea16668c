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


#ifndef KGBENCH_PIPELINE_CONFIG_H_
#define KGBENCH_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/eval/harness.h"
#include "kgbench/hierarchy/gmm.h"
#include "kgbench/kg/alignment.h"
#include "kgbench/kg/graph.h"
#include "kgbench/util/text.h"

namespace kgbench {

struct EndpointSettings {
  std::string kind = "mock";  // "mock", "http" or (rerank only) "none"
  std::string base_url;
  std::string model;
  std::string api_key_env = "KGBENCH_API_KEY";
  double timeout_seconds = 60.0;
};

struct PipelineConfig {
  // [run]
  uint64_t master_seed = 0;
  Language language = Language::kEn;
  int parallelism = 1;
  // [corpus]
  std::vector<std::string> corpus_paths;  // as written; files or directories
  // [chunk]
  double chunk_percentile = 95.0;
  int chunk_max_sentences = 64;
  bool chunk_global_threshold = false;
  // [tree]
  int target_dim = 10;
  int k_max = 50;
  int gmm_restarts = 4;
  double membership_floor = 0.10;
  int max_levels = 4;
  BicPenalty bic_penalty = BicPenalty::kFreeParameters;
  // [kg]
  KThreshold k_threshold = 50;
  std::string stoplist_path;
  ThetaSchedule theta;
  CountingUnit counting_unit = CountingUnit::kTreeNodes;
  std::vector<KThreshold> sweep_k = {10, 50, 100, std::nullopt};
  // [synthesis]
  int n_options = 4;
  long max_chains_per_source = 0;
  long max_chains = 0;
  double temperature = 0.7;
  std::string difficulty = "easy";
  int max_retries = 2;
  // [eval]
  RetrievalConfig retrieval;
  std::vector<std::string> models = {"mock"};
  // [providers]
  EndpointSettings chat;
  EndpointSettings embedding;
  EndpointSettings rerank{"none", "", "", "KGBENCH_API_KEY", 60.0};
  int embedding_dim = 64;
  std::vector<std::string> ensemble = {"judge-a", "judge-b", "judge-c"};
  std::string mock_triplets_path;
  double mock_leak_rate = 0.0;
  std::string cache_dir;

  std::filesystem::path base_dir;  // directory of the config file

  std::filesystem::path Resolve(const std::string& path) const;
};

// Parses INI text. Unknown sections or keys, malformed values and values
// outside their documented ranges raise kValidation.
PipelineConfig ParsePipelineConfig(const std::string& text, const std::filesystem::path& base_dir);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

// Canonical JSON of every setting (paths as written), the basis of the
// config digest.
nlohmann::json ConfigJson(const PipelineConfig& config);
std::string ConfigDigest(const PipelineConfig& config);

}  // namespace kgbench

#endif  // KGBENCH_PIPELINE_CONFIG_H_
