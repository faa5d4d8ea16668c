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

#include "kgbench/providers/embedding.h"

#include <cmath>

#include "kgbench/util/error.h"
#include "kgbench/util/text.h"

namespace kgbench {

void to_json(nlohmann::json& j, const EmbeddingVector& v) {
  j = {{"values", v.values},
       {"dimension", v.dimension},
       {"source_text_hash", v.source_text_hash}};
}

void from_json(const nlohmann::json& j, EmbeddingVector& v) {
  j.at("values").get_to(v.values);
  j.at("dimension").get_to(v.dimension);
  j.at("source_text_hash").get_to(v.source_text_hash);
}

std::vector<EmbeddingVector> EmbedTexts(EmbeddingProvider& provider,
                                        const std::vector<std::string>& texts) {
  Require(!texts.empty(), "embed_texts: empty batch");
  for (size_t i = 0; i < texts.size(); ++i) {
    Require(!NormalizeForMatch(texts[i]).empty(),
            "embed_texts: text " + std::to_string(i) + " is blank");
  }
  std::vector<EmbeddingVector> out = provider.EmbedBatch(texts);
  if (out.size() != texts.size()) {
    Fail(ErrorKind::kProvider, "embedding provider returned " +
                                   std::to_string(out.size()) + " vectors for " +
                                   std::to_string(texts.size()) + " texts");
  }
  for (const auto& v : out) {
    if (v.dimension != out.front().dimension ||
        static_cast<int>(v.values.size()) != v.dimension) {
      Fail(ErrorKind::kProvider, "embedding dimension mismatch within a batch");
    }
  }
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  Require(a.size() == b.size(), "vector dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  return 1.0 - CosineSimilarity(a, b);
}

void NormalizeInPlace(std::vector<double>& v) {
  const double n = Norm(v);
  if (n == 0.0) return;
  for (double& x : v) x /= n;
}

}  // namespace kgbench
