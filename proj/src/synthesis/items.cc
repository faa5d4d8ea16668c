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


#include "kgbench/synthesis/items.h"

#include <algorithm>
#include <set>

#include "kgbench/providers/task.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/parallel.h"
#include "kgbench/util/rng.h"
#include "kgbench/util/text.h"

namespace kgbench {

std::vector<std::string> MaskedEntity::SurfaceForms() const {
  std::vector<std::string> forms = {canonical};
  forms.insert(forms.end(), aliases.begin(), aliases.end());
  return forms;
}

void to_json(nlohmann::json& j, const MaskedEntity& m) {
  j = {{"entity_id", m.entity_id}, {"canonical", m.canonical}, {"aliases", m.aliases}};
}

void from_json(const nlohmann::json& j, MaskedEntity& m) {
  m.entity_id = j.value("entity_id", std::string());
  m.canonical = j.at("canonical").get<std::string>();
  m.aliases = j.value("aliases", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const EvidenceAnchor& a) {
  j = {{"hop", a.hop}, {"doc_id", a.doc_id}, {"evidence", a.evidence}};
}

void from_json(const nlohmann::json& j, EvidenceAnchor& a) {
  a.hop = j.at("hop").get<std::string>();
  a.doc_id = j.at("doc_id").get<std::string>();
  a.evidence = j.at("evidence").get<Evidence>();
}

void to_json(nlohmann::json& j, const GenerationMetadata& g) {
  j = {{"model", g.model},
       {"temperature", g.temperature},
       {"seed", g.seed},
       {"attempts", g.attempts}};
}

void from_json(const nlohmann::json& j, GenerationMetadata& g) {
  g.model = j.value("model", std::string());
  g.temperature = j.value("temperature", 0.0);
  g.seed = j.value("seed", uint64_t{0});
  g.attempts = j.value("attempts", 0);
}

void to_json(nlohmann::json& j, const QualityVerdict& v) {
  j = {{"clinical_task", v.clinical_task},
       {"reasoning_type", v.reasoning_type},
       {"clarity_score", v.clarity},
       {"validity_score", v.validity},
       {"difficulty_score", v.difficulty},
       {"members", v.members},
       {"failed_members", v.failed_members}};
}

void from_json(const nlohmann::json& j, QualityVerdict& v) {
  v.clinical_task = j.at("clinical_task").get<std::string>();
  v.reasoning_type = j.at("reasoning_type").get<std::string>();
  v.clarity = j.at("clarity_score").get<double>();
  v.validity = j.at("validity_score").get<double>();
  v.difficulty = j.at("difficulty_score").get<double>();
  v.members = j.value("members", std::vector<std::string>{});
  v.failed_members = j.value("failed_members", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const QAItem& item) {
  j = {{"qa_id", item.qa_id},
       {"language", item.language},
       {"difficulty", item.difficulty},
       {"clinical_task", item.clinical_task},
       {"question", item.question},
       {"options", item.options},
       {"answer_index", item.answer_index},
       {"hard_negative_index", item.hard_negative_index},
       {"masked_entity", item.masked_entity},
       {"rationale", item.rationale},
       {"evidence_anchors", item.evidence_anchors},
       {"chain_ref", item.chain_ref},
       {"generation_metadata", item.generation_metadata}};
  if (item.quality) j["quality"] = *item.quality;
}

void from_json(const nlohmann::json& j, QAItem& item) {
  item.qa_id = j.at("qa_id").get<std::string>();
  item.language = j.at("language").get<std::string>();
  item.difficulty = j.at("difficulty").get<std::string>();
  item.clinical_task = j.value("clinical_task", std::string(kUnscoredTask));
  item.question = j.at("question").get<std::string>();
  item.options = j.at("options").get<std::vector<std::string>>();
  item.answer_index = j.at("answer_index").get<int>();
  item.hard_negative_index = j.at("hard_negative_index").get<int>();
  item.masked_entity = j.at("masked_entity").get<MaskedEntity>();
  item.rationale = j.value("rationale", std::string());
  item.evidence_anchors = j.value("evidence_anchors", std::vector<EvidenceAnchor>{});
  item.chain_ref = j.value("chain_ref", std::string());
  item.generation_metadata = j.value("generation_metadata", GenerationMetadata{});
  item.quality.reset();
  if (j.contains("quality")) item.quality = j.at("quality").get<QualityVerdict>();
}

void to_json(nlohmann::json& j, const DiscardRecord& d) {
  j = {{"chain_id", d.chain_id}, {"stage", d.stage}, {"reason", d.reason}};
}

void from_json(const nlohmann::json& j, DiscardRecord& d) {
  d.chain_id = j.at("chain_id").get<std::string>();
  d.stage = j.at("stage").get<std::string>();
  d.reason = j.at("reason").get<std::string>();
}

void ValidateDifficulty(const std::string& label) {
  Require(label == "easy" || label == "hard",
          "difficulty must be 'easy' or 'hard', got '" + label + "'");
}

std::vector<std::string> VerifyMasking(const std::string& question,
                                       const std::vector<std::string>& surface_forms) {
  const std::string q = NormalizeForMatch(question);
  std::vector<std::string> violations;
  for (const auto& form : surface_forms) {
    const std::string f = NormalizeForMatch(form);
    if (!f.empty() && q.find(f) != std::string::npos) violations.push_back(form);
  }
  return violations;
}

std::vector<std::string> VerifyMasking(const QAItem& item) {
  return VerifyMasking(item.question, item.masked_entity.SurfaceForms());
}

std::vector<std::string> CheckOptionIntegrity(const QAItem& item) {
  std::vector<std::string> problems;
  const int n = static_cast<int>(item.options.size());
  if (item.answer_index < 0 || item.answer_index >= n) problems.push_back("answer_index out of range");
  if (item.hard_negative_index < 0 || item.hard_negative_index >= n) {
    problems.push_back("hard_negative_index out of range");
  }
  if (item.answer_index == item.hard_negative_index) {
    problems.push_back("answer and hard negative share an index");
  }
  std::set<std::string> seen;
  for (const auto& o : item.options) {
    if (!seen.insert(NormalizeForMatch(o)).second) problems.push_back("duplicate option '" + o + "'");
  }
  return problems;
}

std::optional<std::string> AnchorText(const EvidenceAnchor& anchor, const CorpusStore& corpus) {
  return corpus.SpanText(anchor.doc_id, anchor.evidence.sentence_start,
                         anchor.evidence.sentence_end);
}

void ValidateSynthesisOptions(const SynthesisOptions& options) {
  Require(options.n_options >= 3 && options.n_options <= 26,
          "n_options must lie in [3, 26], got " + std::to_string(options.n_options));
  ValidateDifficulty(options.difficulty);
  Require(options.max_retries >= 0, "max_retries must be non-negative");
  Require(options.filler_min_distance >= 1, "filler_min_distance must be at least 1");
  Require(options.temperature >= 0.0, "temperature must be non-negative");
}

namespace {

const Entity& EntityOf(const KnowledgeGraph& graph, const std::string& id) {
  const Entity* e = graph.FindEntity(id);
  Require(e != nullptr, "unknown entity " + id);
  return *e;
}

std::string ChunkText(const Evidence& evidence, const CorpusStore& corpus) {
  const Chunk* c = corpus.FindChunk(evidence.chunk_id);
  return c ? c->text : std::string();
}

[[noreturn]] void Discard(const ReasoningChain& chain, const std::string& reason) {
  Fail(ErrorKind::kItemDiscarded, "chain " + chain.chain_id + ": " + reason);
}

}  // namespace

ChatRequest VignetteRequest(const ReasoningChain& chain, const KnowledgeGraph& graph,
                            const std::string& context_text, const std::string& target_text,
                            Language language, int attempt,
                            const std::vector<std::string>& previous_violations,
                            const SynthesisOptions& options, uint64_t seed) {
  const Entity& a = EntityOf(graph, chain.a);
  const Entity& bridge = EntityOf(graph, chain.e_bridge);
  const Entity& b = EntityOf(graph, chain.b);
  nlohmann::json masked = nlohmann::json::array({bridge.canonical_name});
  for (const auto& alias : bridge.aliases) masked.push_back(alias);
  nlohmann::json payload = {{"language", LanguageTag(language)},
                            {"context_entity", a.canonical_name},
                            {"context_text", context_text},
                            {"relation_hop1", chain.relation_hop1},
                            {"masked_terms", masked},
                            {"relation_hop2", chain.relation_hop2},
                            {"target_entity", b.canonical_name},
                            {"target_text", target_text},
                            {"attempt", attempt}};
  if (!previous_violations.empty()) payload["previous_violations"] = previous_violations;

  std::string prompt(kVignetteTaskHeader);
  prompt +=
      "\nWrite a realistic patient vignette grounded in the context entity and its source "
      "text, ending with a question whose answer is the target entity. The vignette must "
      "require the reader to infer the intermediate mechanism: none of the masked terms may "
      "appear in the question, in any spelling or case. Also write a rationale that walks "
      "through both steps, from the context entity through the masked mechanism to the "
      "target. Write in the requested language. Reply with strict JSON of the form "
      "{\"question\": \"...\", \"rationale\": \"...\"} and nothing else.\n\n";
  prompt += payload.dump();
  ChatRequest request;
  request.messages = {{"user", prompt}};
  request.temperature = options.temperature;
  request.max_output_tokens = options.max_output_tokens;
  request.model_name = options.model;
  request.seed = static_cast<int64_t>(seed >> 1);
  return request;
}

std::vector<std::string> FillerCandidates(const ReasoningChain& chain, const KnowledgeGraph& graph,
                                          int min_distance) {
  const std::vector<int> hops = HopsFrom(graph, graph.IndexOf(chain.a));
  const std::set<std::string> used = {chain.a, chain.e_bridge, chain.b, chain.e_sib, chain.b_prime};
  std::set<std::string> used_names;
  for (const auto& id : {chain.b, chain.b_prime}) {
    used_names.insert(NormalizeForMatch(EntityOf(graph, id).canonical_name));
  }
  std::vector<std::string> out;
  const auto& entities = graph.entities();
  for (size_t i = 0; i < entities.size(); ++i) {
    if (!graph.InView(i) || entities[i].is_pruned || used.count(entities[i].entity_id)) continue;
    if (hops[i] >= 0 && hops[i] < min_distance) continue;
    if (used_names.count(NormalizeForMatch(entities[i].canonical_name))) continue;
    out.push_back(entities[i].entity_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

QAItem SynthesizeItem(const ReasoningChain& chain, const KnowledgeGraph& graph,
                      const CorpusStore& corpus, ChatClient& chat,
                      const SynthesisOptions& options, uint64_t seed) {
  ValidateSynthesisOptions(options);
  Require(chain.has_hard_negative(), "chain " + chain.chain_id + " has no hard negative");

  std::vector<EvidenceAnchor> anchors;
  for (const auto& [hop, ev] : {std::pair{"hop1", chain.evidence_hop1},
                                std::pair{"hop2", chain.evidence_hop2}}) {
    const Chunk* c = corpus.FindChunk(ev.chunk_id);
    if (c == nullptr) Discard(chain, std::string(hop) + " evidence chunk " + ev.chunk_id + " is unknown");
    EvidenceAnchor anchor{hop, c->doc_id, ev};
    if (!AnchorText(anchor, corpus)) Discard(chain, std::string(hop) + " evidence span does not resolve");
    anchors.push_back(std::move(anchor));
  }
  const Language language = corpus.LanguageOf(anchors[0].doc_id);

  Rng rng(seed);
  std::vector<std::string> fillers = FillerCandidates(chain, graph, options.filler_min_distance);
  const size_t need = static_cast<size_t>(options.n_options - 2);
  if (fillers.size() < need) {
    Discard(chain, "only " + std::to_string(fillers.size()) + " filler entities at distance >= " +
                       std::to_string(options.filler_min_distance) + ", need " +
                       std::to_string(need));
  }
  for (size_t i = 0; i < need; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Uniform(fillers.size() - i));
    std::swap(fillers[i], fillers[j]);
  }
  std::vector<std::string> option_ids = {chain.b, chain.b_prime};
  option_ids.insert(option_ids.end(), fillers.begin(), fillers.begin() + need);
  rng.Shuffle(option_ids);

  QAItem item;
  item.chain_ref = chain.chain_id;
  item.language = std::string(LanguageTag(language));
  item.difficulty = options.difficulty;
  for (size_t i = 0; i < option_ids.size(); ++i) {
    item.options.push_back(EntityOf(graph, option_ids[i]).canonical_name);
    if (option_ids[i] == chain.b) item.answer_index = static_cast<int>(i);
    if (option_ids[i] == chain.b_prime) item.hard_negative_index = static_cast<int>(i);
  }
  const Entity& bridge = EntityOf(graph, chain.e_bridge);
  item.masked_entity = {bridge.entity_id, bridge.canonical_name,
                        {bridge.aliases.begin(), bridge.aliases.end()}};
  item.evidence_anchors = anchors;
  item.qa_id = "Q" + Sha256Hex(chain.chain_id + "|" + std::to_string(seed)).substr(0, 12);

  const std::string context_text = ChunkText(chain.evidence_hop1, corpus);
  const std::string target_text = ChunkText(chain.evidence_hop2, corpus);
  std::vector<std::string> violations;
  std::string last_problem;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    ChatRequest request = VignetteRequest(chain, graph, context_text, target_text, language,
                                          attempt, violations, options, seed);
    const std::string reply = chat.Complete(request);
    item.generation_metadata = {options.model, options.temperature, seed, attempt + 1};
    const auto parsed = ExtractJsonObject(reply);
    if (!parsed || !(*parsed).contains("question") || !(*parsed)["question"].is_string() ||
        NormalizeForMatch((*parsed)["question"].get<std::string>()).empty()) {
      last_problem = "draft was not JSON with a non-empty question";
      continue;
    }
    item.question = (*parsed)["question"].get<std::string>();
    item.rationale = parsed->value("rationale", std::string());
    violations = VerifyMasking(item);
    if (violations.empty()) return item;
    last_problem = "question names masked term";
    for (const auto& v : violations) last_problem += " '" + v + "'";
  }
  Discard(chain, last_problem + " after " + std::to_string(options.max_retries + 1) + " attempts");
}

SynthesisOutcome SynthesizeDataset(const std::vector<ReasoningChain>& chains,
                                   const KnowledgeGraph& graph, const CorpusStore& corpus,
                                   ChatClient& chat, const SynthesisOptions& options) {
  ValidateSynthesisOptions(options);
  struct Slot {
    std::optional<ReasoningChain> chain;
    std::optional<QAItem> item;
    std::optional<DiscardRecord> discard;
  };
  std::vector<Slot> slots(chains.size());
  ParallelFor(chains.size(), static_cast<size_t>(options.parallelism), [&](size_t i) {
    const ReasoningChain& base = chains[i];
    ReasoningChain complete;
    try {
      complete = SampleHardNegative(
          base, graph, DeriveSeed(options.master_seed, "hard-negative", base.chain_id));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNoHardNegative) throw;
      slots[i].discard = DiscardRecord{base.chain_id, "hard_negative", e.what()};
      return;
    }
    try {
      slots[i].item = SynthesizeItem(complete, graph, corpus, chat, options,
                                     DeriveSeed(options.master_seed, "synthesize", base.chain_id));
      slots[i].chain = std::move(complete);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kItemDiscarded) throw;
      slots[i].discard = DiscardRecord{base.chain_id, "synthesis", e.what()};
    }
  });
  SynthesisOutcome out;
  for (auto& s : slots) {
    if (s.item) {
      out.items.push_back(std::move(*s.item));
      out.chains.push_back(std::move(*s.chain));
    }
    if (s.discard) out.discards.push_back(std::move(*s.discard));
  }
  return out;
}

}  // namespace kgbench
