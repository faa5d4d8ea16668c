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

#ifndef KGBENCH_PROVIDERS_MOCK_H_
#define KGBENCH_PROVIDERS_MOCK_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "kgbench/providers/chat.h"
#include "kgbench/providers/embedding.h"

namespace kgbench {

struct FixtureTriplet {
  std::string head;
  std::string relation;
  std::string tail;
};

// Tab-separated head/relation/tail lines; '#' starts a comment.
std::vector<FixtureTriplet> LoadTripletFixture(const std::filesystem::path& path);

struct MockChatOptions {
  std::vector<FixtureTriplet> triplets;
  // Fraction of vignette drafts that name the first masked term, so the
  // masking check and its retry path get exercised offline.
  double leak_rate = 0.0;
  std::string member_name = "mock";
};

// Offline chat provider. Responses are template expansions keyed by the
// request hash, so they are stable across runs and processes:
//   triplet extraction -> fixture triplets whose head and tail both occur in
//                         the node text, cited at the first sentence holding both
//   cluster summary    -> first sentence of every member text
//   vignette           -> templated case stem and two-hop rationale
//   adjudication       -> strict JSON with hash-derived scores
//   multiple choice    -> "The answer is A."
class MockChatProvider : public ChatProvider {
 public:
  explicit MockChatProvider(MockChatOptions options);
  std::string id() const override { return "mock:" + options_.member_name; }
  std::string Complete(const ChatRequest& request) override;

 private:
  std::string ExtractTriplets(const ChatRequest& request) const;
  std::string Summarize(const ChatRequest& request) const;
  std::string DraftVignette(const ChatRequest& request) const;
  std::string Adjudicate(const ChatRequest& request) const;
  std::string AnswerMultipleChoice(const ChatRequest& request) const;

  MockChatOptions options_;
};

// Wraps a callable; used for scripted evaluation models and tests.
class FunctionChatProvider : public ChatProvider {
 public:
  using Handler = std::function<std::string(const ChatRequest&)>;
  FunctionChatProvider(std::string id, Handler handler)
      : id_(std::move(id)), handler_(std::move(handler)) {}
  std::string id() const override { return id_; }
  std::string Complete(const ChatRequest& request) override { return handler_(request); }

 private:
  std::string id_;
  Handler handler_;
};

// Feature-hashing embedder: every token maps to a seeded Gaussian direction,
// a text is the normalized sum of its token directions plus a small
// whole-text component. A pure function of (text, seed); texts that share
// vocabulary land close together.
class MockEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit MockEmbeddingProvider(uint64_t seed, int dimension = 64);
  std::string id() const override { return "mock-embed"; }
  std::vector<EmbeddingVector> EmbedBatch(const std::vector<std::string>& texts) override;

  EmbeddingVector EmbedOne(const std::string& text) const;

 private:
  std::vector<double> Direction(std::string_view key) const;

  uint64_t seed_;
  int dimension_;
};

// Scores passages by the fraction of query tokens they contain.
class MockReranker : public Reranker {
 public:
  std::string id() const override { return "mock-rerank"; }
  std::vector<double> Score(const std::string& query,
                            const std::vector<std::string>& passages) override;
};

}  // namespace kgbench

#endif  // KGBENCH_PROVIDERS_MOCK_H_
