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


#include "kgbench/eval/harness.h"

#include <cctype>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>

#include "kgbench/assets.h"
#include "kgbench/util/error.h"
#include "kgbench/util/files.h"
#include "kgbench/util/jsonl.h"
#include "kgbench/util/parallel.h"

namespace kgbench {

const char* EvalModeName(EvalMode mode) {
  return mode == EvalMode::kRag ? "rag" : "zero_shot";
}

EvalMode ParseEvalMode(std::string_view name) {
  if (name == "zero_shot") return EvalMode::kZeroShot;
  if (name == "rag") return EvalMode::kRag;
  Fail(ErrorKind::kValidation, "mode must be zero_shot or rag, got '" + std::string(name) + "'");
}

namespace {

std::optional<int> LetterIndex(char letter, int n_options) {
  const int index = letter - 'A';
  if (index < 0 || index >= n_options) return std::nullopt;
  return index;
}

std::string Trim(std::string_view s, std::string_view strip) {
  const size_t b = s.find_first_not_of(strip);
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(strip);
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::optional<int> ParseChoice(std::string_view response, int n_options) {
  Require(n_options >= 2 && n_options <= 26,
          "n_options must lie in [2, 26], got " + std::to_string(n_options));
  const std::string text(response);

  static const std::regex kExplicit(
      R"((?:[Aa]nswer\s*(?:is|:)|ANSWER\s*(?:IS|:)|答案\s*(?:是|为|：|:))\s*(?:[Oo]ption\s+)?[\(\[\*]*\s*([A-Z])(?![A-Za-z0-9]))");
  std::optional<char> explicit_letter;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kExplicit);
       it != std::sregex_iterator(); ++it) {
    explicit_letter = (*it)[1].str()[0];  // the last statement wins
  }
  if (explicit_letter) return LetterIndex(*explicit_letter, n_options);

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = Trim(std::string_view(text).substr(pos, end - pos), " \t\r*()[].:");
    if (line.size() == 1 && line[0] >= 'A' && line[0] <= 'Z') return LetterIndex(line[0], n_options);
    pos = end + 1;
  }

  const std::string lead = Trim(text, " \t\r\n*([");
  if (!lead.empty() && lead[0] >= 'A' && lead[0] <= 'Z' &&
      (lead.size() == 1 || !std::isalnum(static_cast<unsigned char>(lead[1])))) {
    return LetterIndex(lead[0], n_options);
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const RetrievalConfig& c) {
  j = {{"coarse_pool_size", c.coarse_pool_size},
       {"rerank_keep", c.rerank_keep},
       {"context_size", c.context_size}};
}

void from_json(const nlohmann::json& j, RetrievalConfig& c) {
  c.coarse_pool_size = j.at("coarse_pool_size").get<int>();
  c.rerank_keep = j.at("rerank_keep").get<int>();
  c.context_size = j.at("context_size").get<int>();
}

void to_json(nlohmann::json& j, const RagContext& c) {
  j = {{"qa_id", c.qa_id},
       {"documents", c.documents},
       {"chunk_ids", c.chunk_ids},
       {"golden_position", c.golden_position},
       {"retrieval_config", c.retrieval_config}};
}

void from_json(const nlohmann::json& j, RagContext& c) {
  c.qa_id = j.at("qa_id").get<std::string>();
  c.documents = j.at("documents").get<std::vector<std::string>>();
  c.chunk_ids = j.value("chunk_ids", std::vector<std::string>{});
  c.golden_position = j.at("golden_position").get<int>();
  c.retrieval_config = j.at("retrieval_config").get<RetrievalConfig>();
}

void to_json(nlohmann::json& j, const EvalOutcome& o) {
  j = {{"model_id", o.model_id},
       {"qa_id", o.qa_id},
       {"mode", EvalModeName(o.mode)},
       {"raw_response", o.raw_response},
       {"parsed_choice", o.parsed_choice ? nlohmann::json(*o.parsed_choice) : nlohmann::json()},
       {"correct", o.correct}};
  if (o.error) j["error"] = *o.error;
}

void from_json(const nlohmann::json& j, EvalOutcome& o) {
  o.model_id = j.at("model_id").get<std::string>();
  o.qa_id = j.at("qa_id").get<std::string>();
  o.mode = ParseEvalMode(j.at("mode").get<std::string>());
  o.raw_response = j.at("raw_response").get<std::string>();
  o.parsed_choice.reset();
  if (!j.at("parsed_choice").is_null()) o.parsed_choice = j.at("parsed_choice").get<int>();
  o.correct = j.at("correct").get<bool>();
  o.error.reset();
  if (j.contains("error")) o.error = j.at("error").get<std::string>();
}

std::string RenderMultipleChoicePrompt(const QAItem& item, const RagContext* context) {
  std::string context_block;
  if (context != nullptr) {
    context_block = "Context documents:\n";
    for (size_t i = 0; i < context->documents.size(); ++i) {
      context_block += "[" + std::to_string(i + 1) + "] " + context->documents[i] + "\n";
    }
    context_block += "\n";
  }
  std::string options;
  for (size_t i = 0; i < item.options.size(); ++i) {
    if (i) options += "\n";
    options += std::string(1, static_cast<char>('A' + i)) + ". " + item.options[i];
  }
  std::string prompt(assets::kMultipleChoicePromptV1);
  auto fill = [&prompt](const std::string& key, const std::string& value) {
    const size_t at = prompt.find(key);
    Require(at != std::string::npos, "prompt template lacks " + key);
    prompt.replace(at, key.size(), value);
  };
  fill("{context}", context_block);
  fill("{question}", item.question);
  fill("{options}", options);
  while (!prompt.empty() && prompt.back() == '\n') prompt.pop_back();
  return prompt;
}

namespace {

JsonlHeader OutcomeHeader(const EvalOptions& options, EvalMode mode) {
  return {kOutcomeSchema,
          kOutcomeSchemaVersion,
          {{"model_id", options.model_id},
           {"mode", EvalModeName(mode)},
           {"prompt_template", kPromptTemplateId}}};
}

// Outcomes already on disk. A torn final line from an interrupted run is
// dropped.
std::vector<EvalOutcome> LoadPartial(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::string content = ReadFile(path);
  JsonlDocument doc;
  try {
    doc = ParseJsonl(content, path.string(), kOutcomeSchema, kOutcomeSchemaVersion);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kParse) throw;
    if (!content.empty() && content.back() == '\n') content.pop_back();
    content.resize(content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1);
    doc = ParseJsonl(content, path.string(), kOutcomeSchema, kOutcomeSchemaVersion);
  }
  std::vector<EvalOutcome> out;
  for (const auto& r : doc.records) out.push_back(r.get<EvalOutcome>());
  return out;
}

bool IsProviderFailure(ErrorKind kind) {
  return kind == ErrorKind::kTransport || kind == ErrorKind::kProtocol ||
         kind == ErrorKind::kProvider;
}

}  // namespace

std::vector<EvalOutcome> EvaluateDataset(const std::vector<QAItem>& items, ChatClient& chat,
                                         EvalMode mode,
                                         const std::map<std::string, RagContext>* contexts,
                                         const EvalOptions& options) {
  if (mode == EvalMode::kRag) {
    Require(contexts != nullptr, "rag mode requires retrieval contexts");
    for (const auto& item : items) {
      Require(contexts->count(item.qa_id) > 0, "no retrieval context for item " + item.qa_id);
    }
  }
  std::map<std::string, EvalOutcome> done;
  if (options.outcomes_path) {
    for (auto& o : LoadPartial(*options.outcomes_path)) {
      if (o.model_id == options.model_id && o.mode == mode) done[o.qa_id] = std::move(o);
    }
  }
  std::ofstream log;
  std::mutex log_mu;
  if (options.outcomes_path) {
    std::vector<nlohmann::json> rows;
    for (const auto& item : items) {
      if (auto it = done.find(item.qa_id); it != done.end()) rows.emplace_back(it->second);
    }
    WriteJsonl(*options.outcomes_path, OutcomeHeader(options, mode), rows);
    log.open(*options.outcomes_path, std::ios::app | std::ios::binary);
    Require(static_cast<bool>(log), "cannot append to " + options.outcomes_path->string());
  }

  std::vector<EvalOutcome> outcomes(items.size());
  std::vector<bool> reused(items.size(), false);
  for (size_t i = 0; i < items.size(); ++i) {
    if (auto it = done.find(items[i].qa_id); it != done.end()) {
      outcomes[i] = it->second;
      reused[i] = true;
    }
  }
  ParallelFor(items.size(), static_cast<size_t>(options.parallelism), [&](size_t i) {
    if (reused[i]) return;
    const QAItem& item = items[i];
    EvalOutcome o;
    o.model_id = options.model_id;
    o.qa_id = item.qa_id;
    o.mode = mode;
    ChatRequest request;
    request.messages = {
        {"user", RenderMultipleChoicePrompt(
                     item, mode == EvalMode::kRag ? &contexts->at(item.qa_id) : nullptr)}};
    request.temperature = 0.0;
    request.max_output_tokens = options.max_output_tokens;
    request.model_name = options.model_name;
    try {
      o.raw_response = chat.Complete(request);
      o.parsed_choice = ParseChoice(o.raw_response, static_cast<int>(item.options.size()));
    } catch (const Error& e) {
      if (!IsProviderFailure(e.kind())) throw;
      o.error = e.what();
    }
    o.correct = o.parsed_choice && *o.parsed_choice == item.answer_index;
    if (log.is_open()) {
      std::lock_guard<std::mutex> lock(log_mu);
      log << nlohmann::json(o).dump() << '\n';
      log.flush();
    }
    outcomes[i] = std::move(o);
  });
  if (options.outcomes_path) {
    log.close();
    std::vector<nlohmann::json> rows(outcomes.begin(), outcomes.end());
    WriteJsonl(*options.outcomes_path, OutcomeHeader(options, mode), rows);
  }
  return outcomes;
}

}  // namespace kgbench
