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

#ifndef KGBENCH_PROVIDERS_HTTP_H_
#define KGBENCH_PROVIDERS_HTTP_H_

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/providers/chat.h"
#include "kgbench/providers/embedding.h"

namespace kgbench {

// OpenAI-compatible endpoint. `base_url` carries scheme, host, optional port
// and path prefix, e.g. "https://api.example.com/v1". The bearer token is
// read from the environment variable named by `api_key_env` at call time; an
// unset variable sends no Authorization header.
struct HttpEndpointConfig {
  std::string base_url;
  std::string model;
  std::string api_key_env = "KGBENCH_API_KEY";
  double timeout_seconds = 60.0;
};

// Up to `max_attempts` tries with exponential backoff starting at
// `initial_backoff`. Only transport failures and HTTP 429 are retried.
struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::function<void(std::chrono::milliseconds)> sleep;  // null: real sleep
};

// POST `body` as JSON to base_url + path and parse the JSON reply.
nlohmann::json PostJson(const HttpEndpointConfig& endpoint,
                        const RetryPolicy& retry, const std::string& path,
                        const nlohmann::json& body);

// POST {base}/chat/completions; reads choices[0].message.content.
class HttpChatProvider : public ChatProvider {
 public:
  HttpChatProvider(HttpEndpointConfig endpoint, RetryPolicy retry = {});
  std::string id() const override { return "http:" + endpoint_.model; }
  std::string Complete(const ChatRequest& request) override;

 private:
  HttpEndpointConfig endpoint_;
  RetryPolicy retry_;
};

// POST {base}/embeddings with {"model", "input": [...]}; reads data[].embedding
// ordered by data[].index.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(HttpEndpointConfig endpoint, RetryPolicy retry = {});
  std::string id() const override { return "http:" + endpoint_.model; }
  std::vector<EmbeddingVector> EmbedBatch(const std::vector<std::string>& texts) override;

 private:
  HttpEndpointConfig endpoint_;
  RetryPolicy retry_;
};

// POST {base}/rerank with {"model", "query", "documents"}; reads
// results[] = {"index", "relevance_score"}.
class HttpReranker : public Reranker {
 public:
  HttpReranker(HttpEndpointConfig endpoint, RetryPolicy retry = {});
  std::string id() const override { return "http:" + endpoint_.model; }
  std::vector<double> Score(const std::string& query,
                            const std::vector<std::string>& passages) override;

 private:
  HttpEndpointConfig endpoint_;
  RetryPolicy retry_;
};

}  // namespace kgbench

#endif  // KGBENCH_PROVIDERS_HTTP_H_
