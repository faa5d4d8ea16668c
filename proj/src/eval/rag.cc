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


#include "kgbench/eval/rag.h"

#include <algorithm>
#include <numeric>

#include "kgbench/util/error.h"
#include "kgbench/util/rng.h"

namespace kgbench {

void ValidateRetrievalConfig(const RetrievalConfig& config) {
  Require(config.context_size >= 1, "context size k must be at least 1");
  Require(config.rerank_keep >= config.context_size,
          "rerank keep N must be at least the context size k");
  Require(config.coarse_pool_size >= config.rerank_keep,
          "coarse pool K must be at least rerank keep N");
}

CorpusIndex::CorpusIndex(const CorpusStore& corpus, EmbeddingProvider& embedder) {
  std::vector<std::string> missing_texts;
  std::vector<size_t> missing;
  for (const Chunk& c : corpus.chunks()) {
    chunks_.push_back(&c);
    vectors_.push_back(c.embedding.values);
    if (c.embedding.values.empty()) {
      missing.push_back(vectors_.size() - 1);
      missing_texts.push_back(c.text);
    }
  }
  if (!missing.empty()) {
    const auto embedded = EmbedTexts(embedder, missing_texts);
    for (size_t i = 0; i < missing.size(); ++i) vectors_[missing[i]] = embedded[i].values;
  }
  for (auto& v : vectors_) NormalizeInPlace(v);
}

double CorpusIndex::Similarity(const std::vector<double>& query, size_t i) const {
  return CosineSimilarity(query, vectors_[i]);
}

std::vector<size_t> CorpusIndex::Rank(const std::vector<double>& query) const {
  std::vector<double> score(vectors_.size());
  for (size_t i = 0; i < vectors_.size(); ++i) score[i] = Similarity(query, i);
  std::vector<size_t> order(vectors_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return score[a] > score[b]; });
  return order;
}

std::string GoldenChunkId(const QAItem& item) {
  for (const auto& a : item.evidence_anchors) {
    if (a.hop == "hop1") return a.evidence.chunk_id;
  }
  Fail(ErrorKind::kContext, "item " + item.qa_id + " has no hop-1 evidence anchor");
}

RagContext BuildRagContext(const QAItem& item, const CorpusIndex& index,
                           EmbeddingProvider& embedder, Reranker* reranker,
                           const RetrievalConfig& config, uint64_t seed) {
  ValidateRetrievalConfig(config);
  const size_t k = static_cast<size_t>(config.context_size);
  Require(index.size() >= k, "corpus has " + std::to_string(index.size()) +
                                 " chunks, fewer than the context size " + std::to_string(k));
  const std::string golden_id = GoldenChunkId(item);
  size_t golden = index.size();
  for (size_t i = 0; i < index.size(); ++i) {
    if (index.chunk(i).chunk_id == golden_id) golden = i;
  }
  if (golden == index.size()) {
    Fail(ErrorKind::kContext, "item " + item.qa_id + ": golden chunk " + golden_id +
                                  " is not in the corpus");
  }

  const auto query = EmbedTexts(embedder, {item.question}).front().values;
  std::vector<size_t> pool = index.Rank(query);
  pool.resize(std::min(pool.size(), static_cast<size_t>(config.coarse_pool_size)));
  if (reranker != nullptr) {
    std::vector<std::string> texts;
    for (size_t i : pool) texts.push_back(index.chunk(i).text);
    const std::vector<double> scores = reranker->Score(item.question, texts);
    Require(scores.size() == pool.size(), "reranker returned the wrong number of scores");
    std::vector<size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    std::vector<size_t> reranked;
    for (size_t o : order) reranked.push_back(pool[o]);
    pool = std::move(reranked);
  }
  pool.resize(std::min(pool.size(), static_cast<size_t>(config.rerank_keep)));

  std::vector<size_t> chosen;
  for (size_t i : pool) {
    if (chosen.size() + 1 >= k) break;
    if (i != golden && index.chunk(i).text != index.chunk(golden).text) chosen.push_back(i);
  }
  // Small corpora can leave the reranked list short of k - 1 distractors.
  for (size_t i : index.Rank(query)) {
    if (chosen.size() + 1 >= k) break;
    if (i == golden || index.chunk(i).text == index.chunk(golden).text ||
        std::find(chosen.begin(), chosen.end(), i) != chosen.end()) {
      continue;
    }
    chosen.push_back(i);
  }
  Require(chosen.size() + 1 == k, "corpus has too few distinct passages for context size " +
                                      std::to_string(k));
  Rng rng(seed);
  const size_t position = static_cast<size_t>(rng.Uniform(k));
  chosen.insert(chosen.begin() + static_cast<long>(position), golden);

  RagContext context;
  context.qa_id = item.qa_id;
  context.golden_position = static_cast<int>(position);
  context.retrieval_config = config;
  for (size_t i : chosen) {
    context.documents.push_back(index.chunk(i).text);
    context.chunk_ids.push_back(index.chunk(i).chunk_id);
  }
  return context;
}

}  // namespace kgbench
