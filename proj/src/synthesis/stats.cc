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


#include "kgbench/synthesis/stats.h"

#include <algorithm>
#include <cmath>

#include "kgbench/util/error.h"

namespace kgbench {
namespace {

std::map<std::string, long> Counts(std::string_view text, TokenMode mode) {
  std::map<std::string, long> counts;
  for (auto& t : TokenTexts(text, mode)) ++counts[t];
  return counts;
}

long Total(const std::map<std::string, long>& counts) {
  long n = 0;
  for (const auto& [_, c] : counts) n += c;
  return n;
}

long ClippedOverlap(const std::map<std::string, long>& candidate,
                    const std::map<std::string, long>& reference) {
  long overlap = 0;
  for (const auto& [token, c] : candidate) {
    if (auto it = reference.find(token); it != reference.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

TokenMode ModeOf(const QAItem& item) { return TokenModeFor(ParseLanguage(item.language)); }

struct Accumulator {
  SplitStats s;
  void AddCount() { ++s.count; }
  void AddMeasured(double qlen, double elen, double cosine, double ra, double rb, double bleu) {
    ++s.measured;
    s.avg_question_length += qlen;
    s.avg_explanation_length += elen;
    s.distractor_similarity += cosine;
    s.rouge1_content_a += ra;
    s.rouge1_content_b += rb;
    s.bleu1_evidence += bleu;
  }
  void AddQuality(const QualityVerdict& v) {
    ++s.scored;
    s.clarity += v.clarity;
    s.validity += v.validity;
    s.difficulty += v.difficulty;
  }
  SplitStats Finish() const {
    SplitStats out = s;
    if (out.measured > 0) {
      const double m = static_cast<double>(out.measured);
      out.avg_question_length /= m;
      out.avg_explanation_length /= m;
      out.distractor_similarity /= m;
      out.rouge1_content_a /= m;
      out.rouge1_content_b /= m;
      out.bleu1_evidence /= m;
    }
    if (out.scored > 0) {
      const double m = static_cast<double>(out.scored);
      out.clarity /= m;
      out.validity /= m;
      out.difficulty /= m;
    }
    return out;
  }
};

double Round(double v, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(v * scale) / scale;
}

nlohmann::json SplitJson(const SplitStats& s) {
  nlohmann::json j = {{"total_qa_pairs", s.count},
                      {"measured_items", s.measured},
                      {"avg_question_length", Round(s.avg_question_length, 1)},
                      {"avg_explanation_length", Round(s.avg_explanation_length, 1)},
                      {"avg_distractor_similarity_cosine", Round(s.distractor_similarity, 3)},
                      {"lexical_overlap_content_a_rouge1", Round(s.rouge1_content_a, 3)},
                      {"lexical_overlap_content_b_rouge1", Round(s.rouge1_content_b, 3)},
                      {"lexical_overlap_evidence_bleu1", Round(s.bleu1_evidence, 3)},
                      {"scored_items", s.scored}};
  if (s.scored > 0) {
    j["ensemble_clarity"] = Round(s.clarity, 2);
    j["ensemble_validity"] = Round(s.validity, 2);
    j["ensemble_difficulty"] = Round(s.difficulty, 2);
  } else {
    j["ensemble_clarity"] = nullptr;
    j["ensemble_validity"] = nullptr;
    j["ensemble_difficulty"] = nullptr;
  }
  return j;
}

}  // namespace

double Rouge1(std::string_view candidate, std::string_view reference, TokenMode mode) {
  const auto c = Counts(candidate, mode);
  const auto r = Counts(reference, mode);
  const long overlap = ClippedOverlap(c, r);
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / Total(c);
  const double recall = static_cast<double>(overlap) / Total(r);
  return 2.0 * precision * recall / (precision + recall);
}

double Bleu1(std::string_view candidate, std::string_view reference, TokenMode mode) {
  const auto c = Counts(candidate, mode);
  const auto r = Counts(reference, mode);
  const long c_len = Total(c);
  const long r_len = Total(r);
  if (c_len == 0 || r_len == 0) return 0.0;
  const double precision = static_cast<double>(ClippedOverlap(c, r)) / c_len;
  const double bp =
      c_len > r_len ? 1.0 : std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len));
  return precision * bp;
}

std::string SplitKey(const QAItem& item) { return item.language + "/" + item.difficulty; }

DatasetStats ComputeOverlapStats(const std::vector<QAItem>& items, const CorpusStore& corpus,
                                 EmbeddingProvider& embedder) {
  DatasetStats stats;
  stats.total = static_cast<long>(items.size());
  std::map<std::string, Accumulator> splits;
  Accumulator overall;
  for (const QAItem& item : items) {
    const std::string key = SplitKey(item);
    splits[key].AddCount();
    overall.AddCount();
    ++stats.task_counts[key + "/" + item.clinical_task];
    if (item.quality) {
      splits[key].AddQuality(*item.quality);
      overall.AddQuality(*item.quality);
    }

    std::optional<std::string> content_a, content_b;
    std::string evidence;
    bool resolved = !item.evidence_anchors.empty();
    for (const auto& anchor : item.evidence_anchors) {
      const auto span = AnchorText(anchor, corpus);
      const Chunk* chunk = corpus.FindChunk(anchor.evidence.chunk_id);
      if (!span || chunk == nullptr) {
        resolved = false;
        break;
      }
      if (!evidence.empty()) evidence += std::string(SentenceJoiner(ParseLanguage(item.language)));
      evidence += *span;
      if (anchor.hop == "hop1") content_a = chunk->text;
      if (anchor.hop == "hop2") content_b = chunk->text;
    }
    if (!resolved || !content_a || !content_b ||
        item.answer_index < 0 || item.hard_negative_index < 0 ||
        item.answer_index >= static_cast<int>(item.options.size()) ||
        item.hard_negative_index >= static_cast<int>(item.options.size())) {
      ++stats.excluded;
      continue;
    }
    const TokenMode mode = ModeOf(item);
    const auto vectors = EmbedTexts(
        embedder, {item.options[item.answer_index], item.options[item.hard_negative_index]});
    const double cosine =
        std::clamp(CosineSimilarity(vectors[0].values, vectors[1].values), 0.0, 1.0);
    const double row[] = {
        static_cast<double>(TokenTexts(item.question, mode).size()),
        static_cast<double>(TokenTexts(item.rationale, mode).size()),
        cosine,
        Rouge1(item.question, *content_a, mode),
        Rouge1(item.question, *content_b, mode),
        Bleu1(item.rationale, evidence, mode)};
    splits[key].AddMeasured(row[0], row[1], row[2], row[3], row[4], row[5]);
    overall.AddMeasured(row[0], row[1], row[2], row[3], row[4], row[5]);
  }
  for (const auto& [key, acc] : splits) stats.splits[key] = acc.Finish();
  stats.overall = overall.Finish();
  return stats;
}

nlohmann::json StatsReportJson(const DatasetStats& stats) {
  nlohmann::json splits = nlohmann::json::object();
  for (const auto& [key, s] : stats.splits) splits[key] = SplitJson(s);
  return {{"total_items", stats.total},
          {"excluded_unresolvable_anchors", stats.excluded},
          {"length_unit", {{"EN", "words"}, {"ZH", "characters"}}},
          {"splits", splits},
          {"overall", SplitJson(stats.overall)},
          {"counts_by_task", stats.task_counts}};
}

}  // namespace kgbench
