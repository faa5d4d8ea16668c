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


#ifndef KGBENCH_SYNTHESIS_ITEMS_H_
#define KGBENCH_SYNTHESIS_ITEMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/corpus/corpus.h"
#include "kgbench/kg/graph.h"
#include "kgbench/providers/chat.h"
#include "kgbench/synthesis/chains.h"

namespace kgbench {

struct MaskedEntity {
  std::string entity_id;
  std::string canonical;
  std::vector<std::string> aliases;

  std::vector<std::string> SurfaceForms() const;
};

struct EvidenceAnchor {
  std::string hop;  // "hop1" or "hop2"
  std::string doc_id;
  Evidence evidence;
};

struct GenerationMetadata {
  std::string model;
  double temperature = 0.0;
  uint64_t seed = 0;
  int attempts = 0;
};

struct QualityVerdict {
  std::string clinical_task;
  std::string reasoning_type;
  double clarity = 0.0;
  double validity = 0.0;
  double difficulty = 0.0;
  std::vector<std::string> members;  // provider ids that returned a usable verdict
  std::vector<std::string> failed_members;
};

inline constexpr char kUnscoredTask[] = "unscored";

struct QAItem {
  std::string qa_id;
  std::string language;    // "EN" or "ZH"
  std::string difficulty;  // "easy" or "hard"
  std::string clinical_task = kUnscoredTask;
  std::string question;
  std::vector<std::string> options;
  int answer_index = 0;
  int hard_negative_index = 0;
  MaskedEntity masked_entity;
  std::string rationale;
  std::vector<EvidenceAnchor> evidence_anchors;
  std::string chain_ref;
  GenerationMetadata generation_metadata;
  std::optional<QualityVerdict> quality;
};

void to_json(nlohmann::json& j, const MaskedEntity& m);
void from_json(const nlohmann::json& j, MaskedEntity& m);
void to_json(nlohmann::json& j, const EvidenceAnchor& a);
void from_json(const nlohmann::json& j, EvidenceAnchor& a);
void to_json(nlohmann::json& j, const GenerationMetadata& g);
void from_json(const nlohmann::json& j, GenerationMetadata& g);
void to_json(nlohmann::json& j, const QualityVerdict& v);
void from_json(const nlohmann::json& j, QualityVerdict& v);
void to_json(nlohmann::json& j, const QAItem& item);
void from_json(const nlohmann::json& j, QAItem& item);

inline constexpr char kDatasetSchema[] = "kgbench.dataset";
inline constexpr int kDatasetSchemaVersion = 1;

void ValidateDifficulty(const std::string& label);

// Surface forms of the masked entity found in `question` after
// NormalizeForMatch on both sides. Empty means the question passes.
std::vector<std::string> VerifyMasking(const std::string& question,
                                       const std::vector<std::string>& surface_forms);
std::vector<std::string> VerifyMasking(const QAItem& item);

// Checks index bounds, distinct options and answer != hard negative.
std::vector<std::string> CheckOptionIntegrity(const QAItem& item);

std::optional<std::string> AnchorText(const EvidenceAnchor& anchor, const CorpusStore& corpus);

struct SynthesisOptions {
  int n_options = 4;
  std::string difficulty = "easy";
  std::string model;
  double temperature = 0.7;
  int max_output_tokens = 1024;
  int max_retries = 2;
  int filler_min_distance = 3;
  int parallelism = 1;
  uint64_t master_seed = 0;
};

void ValidateSynthesisOptions(const SynthesisOptions& options);

ChatRequest VignetteRequest(const ReasoningChain& chain, const KnowledgeGraph& graph,
                            const std::string& context_text, const std::string& target_text,
                            Language language, int attempt,
                            const std::vector<std::string>& previous_violations,
                            const SynthesisOptions& options, uint64_t seed);

// Entities usable as filler options: in view, at undirected distance >= the
// configured minimum from A (unreachable qualifies), sorted by id.
std::vector<std::string> FillerCandidates(const ReasoningChain& chain, const KnowledgeGraph& graph,
                                          int min_distance);

// Builds one item from a chain that already carries its hard negative.
// Throws kValidation on bad options, kItemDiscarded when the item cannot be
// produced, and provider errors unchanged.
QAItem SynthesizeItem(const ReasoningChain& chain, const KnowledgeGraph& graph,
                      const CorpusStore& corpus, ChatClient& chat,
                      const SynthesisOptions& options, uint64_t seed);

struct DiscardRecord {
  std::string chain_id;
  std::string stage;  // "hard_negative" or "synthesis"
  std::string reason;
};

void to_json(nlohmann::json& j, const DiscardRecord& d);
void from_json(const nlohmann::json& j, DiscardRecord& d);

struct SynthesisOutcome {
  std::vector<ReasoningChain> chains;  // completed chains of retained items
  std::vector<QAItem> items;
  std::vector<DiscardRecord> discards;
};

// Hard-negative sampling and item synthesis for every mined chain, with
// per-chain seeds DeriveSeed(master, "hard-negative" | "synthesize", chain_id).
SynthesisOutcome SynthesizeDataset(const std::vector<ReasoningChain>& chains,
                                   const KnowledgeGraph& graph, const CorpusStore& corpus,
                                   ChatClient& chat, const SynthesisOptions& options);

}  // namespace kgbench

#endif  // KGBENCH_SYNTHESIS_ITEMS_H_
