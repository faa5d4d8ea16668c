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


#ifndef KGBENCH_SYNTHESIS_STATS_H_
#define KGBENCH_SYNTHESIS_STATS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgbench/corpus/corpus.h"
#include "kgbench/providers/embedding.h"
#include "kgbench/synthesis/items.h"
#include "kgbench/util/text.h"

namespace kgbench {

// Unigram F1 with clipped counts. Zero when either side has no tokens.
double Rouge1(std::string_view candidate, std::string_view reference, TokenMode mode);

// Clipped unigram precision times the brevity penalty exp(1 - r/c) for c <= r.
double Bleu1(std::string_view candidate, std::string_view reference, TokenMode mode);

struct SplitStats {
  long count = 0;
  long measured = 0;  // items whose anchors resolved
  double avg_question_length = 0.0;
  double avg_explanation_length = 0.0;
  double distractor_similarity = 0.0;
  double rouge1_content_a = 0.0;
  double rouge1_content_b = 0.0;
  double bleu1_evidence = 0.0;
  long scored = 0;  // items with a quality verdict
  double clarity = 0.0;
  double validity = 0.0;
  double difficulty = 0.0;
};

struct DatasetStats {
  long total = 0;
  long excluded = 0;  // unresolvable anchors
  std::map<std::string, SplitStats> splits;  // "EN/easy", ...
  SplitStats overall;
  std::map<std::string, long> task_counts;  // "EN/easy/Basic Medicine"
};

std::string SplitKey(const QAItem& item);

DatasetStats ComputeOverlapStats(const std::vector<QAItem>& items, const CorpusStore& corpus,
                                 EmbeddingProvider& embedder);

nlohmann::json StatsReportJson(const DatasetStats& stats);

}  // namespace kgbench

#endif  // KGBENCH_SYNTHESIS_STATS_H_
