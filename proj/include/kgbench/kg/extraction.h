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

#ifndef KGBENCH_KG_EXTRACTION_H_
#define KGBENCH_KG_EXTRACTION_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/corpus/corpus.h"
#include "kgbench/hierarchy/summary_tree.h"
#include "kgbench/kg/graph.h"
#include "kgbench/providers/chat.h"

namespace kgbench {

// A triplet as returned by the model, before entity resolution.
struct RawTriplet {
  std::string head;
  std::string relation;
  std::string tail;
  Evidence evidence;
  double confidence = 1.0;
  std::string source_node;
};

void to_json(nlohmann::json& j, const RawTriplet& t);
void from_json(const nlohmann::json& j, RawTriplet& t);

struct RejectedTriplet {
  std::string source_node;
  nlohmann::json raw;
  std::string reason;
};

void to_json(nlohmann::json& j, const RejectedTriplet& r);

struct ExtractionResult {
  std::string node_id;
  std::vector<RawTriplet> accepted;
  std::vector<RejectedTriplet> rejected;
  int attempts = 0;
  std::optional<std::string> error;  // set when no valid JSON came back
};

struct ExtractionOptions {
  std::string model;
  int max_output_tokens = 2048;
  int max_reasks = 2;
  int parallelism = 1;
};

// Text the model reads for a node: the chunk text at level 0, the summary
// above it.
std::string NodeText(const SummaryTreeNode& node, const CorpusStore& corpus);

ChatRequest ExtractionRequest(const std::string& node_text, const nlohmann::json& sentences,
                              Language language, const ExtractionOptions& options);

// Checks one returned object against the node's source chunks. Returns the
// rejection reason, or nullopt with `out` filled in.
std::optional<std::string> ValidateRawTriplet(const nlohmann::json& raw,
                                              const std::vector<const Chunk*>& source_chunks,
                                              const CorpusStore& corpus, RawTriplet& out);

ExtractionResult ExtractTriplets(const SummaryTreeNode& node,
                                 const std::vector<const Chunk*>& source_chunks,
                                 const CorpusStore& corpus, ChatClient& chat,
                                 const ExtractionOptions& options);

// Every tree node in tree order; results are indexed like tree.nodes.
std::vector<ExtractionResult> ExtractAll(const SummaryTree& tree, const CorpusStore& corpus,
                                         ChatClient& chat, const ExtractionOptions& options);

}  // namespace kgbench

#endif  // KGBENCH_KG_EXTRACTION_H_
