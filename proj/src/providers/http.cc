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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "kgbench/providers/http.h"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"

namespace kgbench {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl Split(const std::string& url) {
  const size_t scheme_end = url.find("://");
  Require(scheme_end != std::string::npos, "endpoint URL lacks a scheme: " + url);
  const size_t path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.prefix = url.substr(path_start);
  }
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::string Snippet(const std::string& body) {
  return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

}  // namespace

nlohmann::json PostJson(const HttpEndpointConfig& endpoint,
                        const RetryPolicy& retry, const std::string& path,
                        const nlohmann::json& body) {
  const SplitUrl url = Split(endpoint.base_url);
  httplib::Client client(url.origin);
  const auto timeout = std::chrono::milliseconds(
      static_cast<int64_t>(endpoint.timeout_seconds * 1000.0));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string payload = body.dump();
  const int attempts = std::max(1, retry.max_attempts);
  auto backoff = retry.initial_backoff;
  std::string last_failure;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    auto result = client.Post(url.prefix + path, headers, payload, "application/json");
    if (!result) {
      last_failure = "transport failure: " + httplib::to_string(result.error());
    } else if (result->status == 429) {
      last_failure = "rate limited (HTTP 429)";
    } else if (result->status < 200 || result->status >= 300) {
      Fail(ErrorKind::kProvider, "HTTP " + std::to_string(result->status) + " from " +
                                     endpoint.base_url + path + ": " +
                                     Snippet(result->body));
    } else {
      auto parsed = nlohmann::json::parse(result->body, nullptr, false);
      if (parsed.is_discarded()) {
        Fail(ErrorKind::kProtocol, "malformed JSON from " + endpoint.base_url +
                                       path + ": " + Snippet(result->body));
      }
      return parsed;
    }
    if (attempt < attempts) {
      if (retry.sleep) {
        retry.sleep(backoff);
      } else {
        std::this_thread::sleep_for(backoff);
      }
      backoff *= 2;
    }
  }
  Fail(ErrorKind::kTransport, endpoint.base_url + path + ": " + last_failure +
                                  " after " + std::to_string(attempts) + " attempts");
}

HttpChatProvider::HttpChatProvider(HttpEndpointConfig endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(std::move(retry)) {}

std::string HttpChatProvider::Complete(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.text}});
  }
  nlohmann::json body = {
      {"model", request.model_name.empty() ? endpoint_.model : request.model_name},
      {"messages", messages},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens}};
  if (request.seed) body["seed"] = *request.seed;
  const auto reply = PostJson(endpoint_, retry_, "/chat/completions", body);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kProtocol, std::string("chat reply lacks choices[0].message.content: ") +
                                   e.what());
  }
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEndpointConfig endpoint,
                                             RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(std::move(retry)) {}

std::vector<EmbeddingVector> HttpEmbeddingProvider::EmbedBatch(
    const std::vector<std::string>& texts) {
  const auto reply = PostJson(endpoint_, retry_, "/embeddings",
                              {{"model", endpoint_.model}, {"input", texts}});
  std::vector<EmbeddingVector> out(texts.size());
  try {
    const auto& data = reply.at("data");
    if (data.size() != texts.size()) {
      Fail(ErrorKind::kProvider, "embedding reply has " + std::to_string(data.size()) +
                                     " rows for " + std::to_string(texts.size()) +
                                     " inputs");
    }
    for (size_t row = 0; row < data.size(); ++row) {
      const size_t index = data[row].value("index", row);
      Require(index < texts.size(), "embedding reply index out of range");
      auto& v = out[index];
      data[row].at("embedding").get_to(v.values);
      v.dimension = static_cast<int>(v.values.size());
      v.source_text_hash = Sha256Hex(texts[index]);
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kProtocol, std::string("malformed embedding reply: ") + e.what());
  }
  return out;
}

HttpReranker::HttpReranker(HttpEndpointConfig endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(std::move(retry)) {}

std::vector<double> HttpReranker::Score(const std::string& query,
                                        const std::vector<std::string>& passages) {
  const auto reply =
      PostJson(endpoint_, retry_, "/rerank",
               {{"model", endpoint_.model}, {"query", query}, {"documents", passages}});
  std::vector<double> scores(passages.size(), -std::numeric_limits<double>::infinity());
  try {
    for (const auto& r : reply.at("results")) {
      const size_t index = r.at("index").get<size_t>();
      Require(index < passages.size(), "rerank reply index out of range");
      scores[index] = r.at("relevance_score").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kProtocol, std::string("malformed rerank reply: ") + e.what());
  }
  return scores;
}

}  // namespace kgbench
