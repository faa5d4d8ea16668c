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


#ifndef KGBENCH_EVAL_RAG_H_
#define KGBENCH_EVAL_RAG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "kgbench/corpus/corpus.h"
#include "kgbench/eval/harness.h"
#include "kgbench/providers/embedding.h"
#include "kgbench/synthesis/items.h"

namespace kgbench {

void ValidateRetrievalConfig(const RetrievalConfig& config);

// Unit-normalized chunk embeddings for cosine retrieval. Chunks that carry
// no stored embedding are embedded with the provider.
class CorpusIndex {
 public:
  CorpusIndex(const CorpusStore& corpus, EmbeddingProvider& embedder);

  size_t size() const { return chunks_.size(); }
  const Chunk& chunk(size_t i) const { return *chunks_[i]; }
  // Chunk indices by descending cosine similarity to `query`, ties by index.
  std::vector<size_t> Rank(const std::vector<double>& query) const;
  double Similarity(const std::vector<double>& query, size_t i) const;

 private:
  std::vector<const Chunk*> chunks_;
  std::vector<std::vector<double>> vectors_;
};

// The chunk holding the hop-1 evidence, which states the masked bridge.
std::string GoldenChunkId(const QAItem& item);

// Coarse cosine retrieval of the question, optional rerank, then the top
// non-golden passages with the golden paragraph inserted at a seeded
// position.
RagContext BuildRagContext(const QAItem& item, const CorpusIndex& index,
                           EmbeddingProvider& embedder, Reranker* reranker,
                           const RetrievalConfig& config, uint64_t seed);

}  // namespace kgbench

#endif  // KGBENCH_EVAL_RAG_H_
