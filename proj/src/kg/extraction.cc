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

#include "kgbench/kg/extraction.h"

#include "kgbench/kg/alignment.h"
#include "kgbench/providers/task.h"
#include "kgbench/util/error.h"
#include "kgbench/util/parallel.h"

namespace kgbench {
namespace {

std::string StringField(const nlohmann::json& raw, const char* key) {
  if (!raw.contains(key) || !raw[key].is_string()) return {};
  return raw[key].get<std::string>();
}

bool FoundBy(std::string_view text, const std::string& surface, TokenMode mode) {
  MentionVocabulary vocab(mode);
  vocab.Add(surface, "x");
  return !vocab.AlignMaxMatch(text).empty();
}

}  // namespace

void to_json(nlohmann::json& j, const RawTriplet& t) {
  j = {{"head", t.head},         {"relation", t.relation},     {"tail", t.tail},
       {"evidence", t.evidence}, {"confidence", t.confidence}, {"source_node", t.source_node}};
}

void from_json(const nlohmann::json& j, RawTriplet& t) {
  t.head = j.at("head").get<std::string>();
  t.relation = j.at("relation").get<std::string>();
  t.tail = j.at("tail").get<std::string>();
  t.evidence = j.at("evidence").get<Evidence>();
  t.confidence = j.value("confidence", 1.0);
  t.source_node = j.value("source_node", std::string());
}

void to_json(nlohmann::json& j, const RejectedTriplet& r) {
  j = {{"source_node", r.source_node}, {"raw", r.raw}, {"reason", r.reason}};
}

std::string NodeText(const SummaryTreeNode& node, const CorpusStore& corpus) {
  if (node.level > 0) return node.summary_text;
  const Chunk* c = corpus.FindChunk(node.node_id);
  Require(c != nullptr, "leaf " + node.node_id + " has no chunk");
  return c->text;
}

ChatRequest ExtractionRequest(const std::string& node_text, const nlohmann::json& sentences,
                              Language language, const ExtractionOptions& options) {
  const nlohmann::json payload = {
      {"language", LanguageTag(language)}, {"node_text", node_text}, {"sentences", sentences}};
  std::string prompt(kTripletTaskHeader);
  prompt +=
      "\nExtract medical knowledge triplets (head entity, relation, tail entity) stated in "
      "the node text. Every triplet must cite the source sentences that state it: give the "
      "chunk_id and the inclusive sentence_start and sentence_end indices from the sentence "
      "list, and use entity names exactly as they are written there. Reply with strict JSON "
      "of the form {\"triplets\": [{\"head\": \"...\", \"relation\": \"...\", \"tail\": \"...\", "
      "\"chunk_id\": \"...\", \"sentence_start\": 0, \"sentence_end\": 0, \"confidence\": 1.0}]} "
      "and nothing else.\n\n";
  prompt += payload.dump();
  ChatRequest request;
  request.messages = {{"user", prompt}};
  request.temperature = 0.0;
  request.max_output_tokens = options.max_output_tokens;
  request.model_name = options.model;
  return request;
}

std::optional<std::string> ValidateRawTriplet(const nlohmann::json& raw,
                                              const std::vector<const Chunk*>& source_chunks,
                                              const CorpusStore& corpus, RawTriplet& out) {
  if (!raw.is_object()) return "triplet is not an object";
  out.head = StringField(raw, "head");
  out.relation = StringField(raw, "relation");
  out.tail = StringField(raw, "tail");
  if (NormalizeForMatch(out.head).empty() || NormalizeForMatch(out.tail).empty() ||
      NormalizeForMatch(out.relation).empty()) {
    return "missing head, relation or tail";
  }
  if (NormalizeForMatch(out.head) == NormalizeForMatch(out.tail)) return "head equals tail";
  out.confidence = 1.0;
  if (raw.contains("confidence")) {
    if (!raw["confidence"].is_number()) return "confidence is not a number";
    out.confidence = raw["confidence"].get<double>();
    if (!(out.confidence >= 0.0 && out.confidence <= 1.0)) return "confidence outside [0, 1]";
  }
  const std::string chunk_id = StringField(raw, "chunk_id");
  const Chunk* chunk = nullptr;
  for (const Chunk* c : source_chunks) {
    if (c->chunk_id == chunk_id) chunk = c;
  }
  if (chunk == nullptr) return "evidence chunk '" + chunk_id + "' is not under this node";
  if (!raw.contains("sentence_start") || !raw["sentence_start"].is_number_integer()) {
    return "missing sentence_start";
  }
  const int start = raw["sentence_start"].get<int>();
  const int end = raw.contains("sentence_end") && raw["sentence_end"].is_number_integer()
                      ? raw["sentence_end"].get<int>()
                      : start;
  if (start > end || start < chunk->sentence_start || end > chunk->sentence_end) {
    return "sentence span [" + std::to_string(start) + ", " + std::to_string(end) +
           "] is outside chunk " + chunk_id;
  }
  const std::optional<std::string> span = corpus.SpanText(chunk->doc_id, start, end);
  if (!span) return "sentence span does not resolve";
  const TokenMode mode = TokenModeFor(corpus.LanguageOf(chunk->doc_id));
  if (!FoundBy(*span, out.head, mode)) return "head '" + out.head + "' not found in cited span";
  if (!FoundBy(*span, out.tail, mode)) return "tail '" + out.tail + "' not found in cited span";
  int page = chunk->page_anchor;
  for (const Sentence* s : corpus.DocumentSentences(chunk->doc_id)) {
    if (s->sentence_index == start) page = s->page_number;
  }
  out.evidence = {chunk_id, start, end, page};
  return std::nullopt;
}

ExtractionResult ExtractTriplets(const SummaryTreeNode& node,
                                 const std::vector<const Chunk*>& source_chunks,
                                 const CorpusStore& corpus, ChatClient& chat,
                                 const ExtractionOptions& options) {
  ExtractionResult result;
  result.node_id = node.node_id;
  const std::string text = NodeText(node, corpus);
  if (NormalizeForMatch(text).empty() || source_chunks.empty()) return result;
  Language language = corpus.LanguageOf(source_chunks.front()->doc_id);
  nlohmann::json sentences = nlohmann::json::array();
  for (const Chunk* c : source_chunks) {
    for (const Sentence* s : corpus.DocumentSentences(c->doc_id)) {
      if (s->sentence_index < c->sentence_start || s->sentence_index > c->sentence_end) continue;
      sentences.push_back(
          {{"chunk_id", c->chunk_id}, {"sentence_index", s->sentence_index}, {"text", s->text}});
    }
  }
  ChatRequest request = ExtractionRequest(text, sentences, language, options);
  std::optional<nlohmann::json> parsed;
  for (int attempt = 0; attempt <= options.max_reasks; ++attempt) {
    ++result.attempts;
    const std::string reply = chat.Complete(request);
    parsed = ExtractJsonObject(reply);
    if (parsed && parsed->contains("triplets") && (*parsed)["triplets"].is_array()) break;
    parsed.reset();
    request.messages.push_back({"assistant", reply});
    request.messages.push_back(
        {"user", "That reply was not valid JSON with a \"triplets\" array. Reply again with the "
                 "JSON object only."});
  }
  if (!parsed) {
    result.error = "no valid triplet JSON after " + std::to_string(result.attempts) + " attempts";
    return result;
  }
  for (const auto& raw : (*parsed)["triplets"]) {
    RawTriplet t;
    if (auto reason = ValidateRawTriplet(raw, source_chunks, corpus, t)) {
      result.rejected.push_back({node.node_id, raw, *reason});
      continue;
    }
    t.source_node = node.node_id;
    result.accepted.push_back(std::move(t));
  }
  return result;
}

std::vector<ExtractionResult> ExtractAll(const SummaryTree& tree, const CorpusStore& corpus,
                                         ChatClient& chat, const ExtractionOptions& options) {
  std::vector<ExtractionResult> results(tree.nodes.size());
  ParallelFor(tree.nodes.size(), static_cast<size_t>(options.parallelism), [&](size_t i) {
    const SummaryTreeNode& node = tree.nodes[i];
    std::vector<const Chunk*> chunks;
    for (const auto& id : LeafDescendants(tree, node.node_id)) {
      const Chunk* c = corpus.FindChunk(id);
      Require(c != nullptr, "tree leaf " + id + " is missing from the chunk store");
      chunks.push_back(c);
    }
    results[i] = ExtractTriplets(node, chunks, corpus, chat, options);
  });
  return results;
}

}  // namespace kgbench
