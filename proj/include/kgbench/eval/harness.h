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


#ifndef KGBENCH_EVAL_HARNESS_H_
#define KGBENCH_EVAL_HARNESS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgbench/providers/chat.h"
#include "kgbench/synthesis/items.h"

namespace kgbench {

enum class EvalMode { kZeroShot, kRag };

const char* EvalModeName(EvalMode mode);
EvalMode ParseEvalMode(std::string_view name);

inline constexpr char kPromptTemplateId[] = "mcq-v1";

// Option index, or nullopt when no letter can be extracted. Precedence:
// an explicit "answer is X" / "Answer: X" / "答案是X" statement, then a
// letter standing alone on its own line, then a leading letter token.
std::optional<int> ParseChoice(std::string_view response, int n_options);

struct RetrievalConfig {
  int coarse_pool_size = 50;
  int rerank_keep = 15;
  int context_size = 5;
};

void to_json(nlohmann::json& j, const RetrievalConfig& c);
void from_json(const nlohmann::json& j, RetrievalConfig& c);

struct RagContext {
  std::string qa_id;
  std::vector<std::string> documents;
  std::vector<std::string> chunk_ids;  // parallel to documents
  int golden_position = 0;
  RetrievalConfig retrieval_config;
};

void to_json(nlohmann::json& j, const RagContext& c);
void from_json(const nlohmann::json& j, RagContext& c);

struct EvalOutcome {
  std::string model_id;
  std::string qa_id;
  EvalMode mode = EvalMode::kZeroShot;
  std::string raw_response;
  std::optional<int> parsed_choice;
  bool correct = false;
  std::optional<std::string> error;
};

void to_json(nlohmann::json& j, const EvalOutcome& o);
void from_json(const nlohmann::json& j, EvalOutcome& o);

inline constexpr char kOutcomeSchema[] = "kgbench.outcomes";
inline constexpr int kOutcomeSchemaVersion = 1;

std::string RenderMultipleChoicePrompt(const QAItem& item, const RagContext* context);

struct EvalOptions {
  std::string model_id = "model";
  std::string model_name;
  int max_output_tokens = 64;
  int parallelism = 1;
  // When set, outcomes are appended here as they complete and any outcomes
  // already present for the same model and mode are reused.
  std::optional<std::filesystem::path> outcomes_path;
};

// One outcome per item, in dataset order. RAG mode needs a context for every
// item (kValidation otherwise). Provider failures become unparseable
// outcomes carrying the error text.
std::vector<EvalOutcome> EvaluateDataset(const std::vector<QAItem>& items, ChatClient& chat,
                                         EvalMode mode,
                                         const std::map<std::string, RagContext>* contexts,
                                         const EvalOptions& options);

}  // namespace kgbench

#endif  // KGBENCH_EVAL_HARNESS_H_
