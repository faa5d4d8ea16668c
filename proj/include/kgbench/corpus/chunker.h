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

#ifndef KGBENCH_CORPUS_CHUNKER_H_
#define KGBENCH_CORPUS_CHUNKER_H_

#include <optional>
#include <vector>

#include "kgbench/corpus/corpus.h"
#include "kgbench/providers/embedding.h"

namespace kgbench {

struct ChunkOptions {
  double percentile = 95.0;  // in (0, 100]
  int max_sentences = 64;    // forced break once a chunk reaches this size
};

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value (1-based).
double NearestRankPercentile(std::vector<double> values, double percentile);

// Cosine distance between each pair of consecutive vectors.
std::vector<double> ConsecutiveDistances(const std::vector<EmbeddingVector>& embeddings);

// Boundary after position i iff distances[i] >= tau, except when all
// distances are equal, which yields no boundary at all.
std::vector<bool> BreakMask(const std::vector<double>& distances, double tau);

// Splits one document's sentences into contiguous chunks. The threshold is
// the nearest-rank percentile of the document's own consecutive distances
// unless `global_tau` supplies a corpus-wide value. Each chunk embedding is
// the renormalized mean of its sentence vectors.
std::vector<Chunk> SemanticChunk(const std::vector<Sentence>& sentences,
                                 const std::vector<EmbeddingVector>& embeddings,
                                 const ChunkOptions& options,
                                 Language language = Language::kEn,
                                 std::optional<double> global_tau = std::nullopt);

}  // namespace kgbench

#endif  // KGBENCH_CORPUS_CHUNKER_H_
