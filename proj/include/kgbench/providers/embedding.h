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

#ifndef KGBENCH_PROVIDERS_EMBEDDING_H_
#define KGBENCH_PROVIDERS_EMBEDDING_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace kgbench {

struct EmbeddingVector {
  std::vector<double> values;
  int dimension = 0;
  std::string source_text_hash;
};

void to_json(nlohmann::json& j, const EmbeddingVector& v);
void from_json(const nlohmann::json& j, EmbeddingVector& v);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  // One vector per text, in input order. Texts are pre-validated.
  virtual std::vector<EmbeddingVector> EmbedBatch(
      const std::vector<std::string>& texts) = 0;
};

// Validates inputs (non-empty batch, no blank strings), calls the provider
// and checks cardinality and a uniform dimension (kProvider otherwise).
std::vector<EmbeddingVector> EmbedTexts(EmbeddingProvider& provider,
                                        const std::vector<std::string>& texts);

// Cross-encoder style relevance scorer; higher is more relevant.
class Reranker {
 public:
  virtual ~Reranker() = default;
  virtual std::string id() const = 0;
  virtual std::vector<double> Score(const std::string& query,
                                    const std::vector<std::string>& passages) = 0;
};

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> a);
// Returns 0 when either vector has zero norm.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);
double CosineDistance(std::span<const double> a, std::span<const double> b);
void NormalizeInPlace(std::vector<double>& v);

}  // namespace kgbench

#endif  // KGBENCH_PROVIDERS_EMBEDDING_H_
