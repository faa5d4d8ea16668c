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

#include "kgbench/corpus/chunker.h"

#include <algorithm>
#include <cmath>

#include "kgbench/util/error.h"

namespace kgbench {

double NearestRankPercentile(std::vector<double> values, double percentile) {
  Require(!values.empty(), "percentile of an empty set");
  Require(percentile > 0.0 && percentile <= 100.0, "percentile must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  const double exact = percentile / 100.0 * static_cast<double>(values.size());
  // Guard against 95/100*20 = 19.000000000000004 style round-up.
  size_t rank = static_cast<size_t>(std::ceil(exact - 1e-9));
  rank = std::clamp<size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<double> ConsecutiveDistances(const std::vector<EmbeddingVector>& embeddings) {
  std::vector<double> out;
  for (size_t i = 0; i + 1 < embeddings.size(); ++i) {
    out.push_back(CosineDistance(embeddings[i].values, embeddings[i + 1].values));
  }
  return out;
}

std::vector<bool> BreakMask(const std::vector<double>& distances, double tau) {
  std::vector<bool> mask(distances.size(), false);
  if (distances.empty()) return mask;
  const bool all_equal = std::all_of(distances.begin(), distances.end(),
                                     [&](double d) { return d == distances.front(); });
  if (all_equal) return mask;
  for (size_t i = 0; i < distances.size(); ++i) mask[i] = distances[i] >= tau;
  return mask;
}

std::vector<Chunk> SemanticChunk(const std::vector<Sentence>& sentences,
                                 const std::vector<EmbeddingVector>& embeddings,
                                 const ChunkOptions& options, Language language,
                                 std::optional<double> global_tau) {
  Require(!sentences.empty(), "semantic_chunk: no sentences");
  Require(sentences.size() == embeddings.size(),
          "semantic_chunk: " + std::to_string(embeddings.size()) + " embeddings for " +
              std::to_string(sentences.size()) + " sentences");
  Require(options.max_sentences >= 1, "semantic_chunk: max_sentences must be >= 1");
  for (const auto& s : sentences) {
    Require(s.doc_id == sentences.front().doc_id,
            "semantic_chunk: sentences span more than one document");
  }

  const std::vector<double> distances = ConsecutiveDistances(embeddings);
  std::vector<bool> mask(distances.size(), false);
  if (!distances.empty()) {
    const double tau = global_tau ? *global_tau
                                  : NearestRankPercentile(distances, options.percentile);
    mask = BreakMask(distances, tau);
  }

  std::vector<Chunk> chunks;
  const std::string_view joiner = SentenceJoiner(language);
  size_t start = 0;
  auto close = [&](size_t end) {
    Chunk c;
    c.doc_id = sentences[start].doc_id;
    c.chunk_id = c.doc_id + "#c" + std::to_string(chunks.size());
    c.sentence_start = sentences[start].sentence_index;
    c.sentence_end = sentences[end].sentence_index;
    c.page_anchor = sentences[start].page_number;
    std::vector<double> mean(embeddings[start].values.size(), 0.0);
    for (size_t i = start; i <= end; ++i) {
      if (i > start) c.text += joiner;
      c.text += sentences[i].text;
      Require(embeddings[i].values.size() == mean.size(),
              "semantic_chunk: embedding dimension mismatch");
      for (size_t k = 0; k < mean.size(); ++k) mean[k] += embeddings[i].values[k];
    }
    NormalizeInPlace(mean);
    c.embedding.dimension = static_cast<int>(mean.size());
    c.embedding.values = std::move(mean);
    c.embedding.source_text_hash = "mean:" + c.chunk_id;
    chunks.push_back(std::move(c));
    start = end + 1;
  };
  for (size_t i = 0; i < sentences.size(); ++i) {
    const bool last = i + 1 == sentences.size();
    const bool natural = !last && mask[i];
    const bool forced = static_cast<int>(i - start + 1) >= options.max_sentences;
    if (last || natural || forced) close(i);
  }
  return chunks;
}

}  // namespace kgbench
