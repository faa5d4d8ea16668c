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

#include "kgbench/providers/chat.h"

#include "kgbench/providers/cache.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"

namespace kgbench {

void ValidateRequest(const ChatRequest& request) {
  Require(!request.messages.empty(), "chat request has no messages");
  for (const auto& m : request.messages) {
    Require(!m.role.empty(), "chat message with empty role");
  }
  Require(request.temperature >= 0.0, "temperature must be >= 0");
  Require(request.max_output_tokens > 0, "max_output_tokens must be positive");
}

nlohmann::json CanonicalJson(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"text", m.text}});
  }
  nlohmann::json j = {{"messages", messages},
                      {"temperature", request.temperature},
                      {"max_output_tokens", request.max_output_tokens},
                      {"model_name", request.model_name}};
  j["seed"] = request.seed ? nlohmann::json(*request.seed) : nlohmann::json();
  return j;
}

std::string RequestHash(const ChatRequest& request) {
  return Sha256Hex(CanonicalJson(request).dump(
      -1, ' ', false, nlohmann::json::error_handler_t::replace));
}

ChatClient::ChatClient(std::shared_ptr<ChatProvider> provider,
                       std::shared_ptr<ResponseCache> cache, int max_in_flight)
    : provider_(std::move(provider)),
      cache_(std::move(cache)),
      in_flight_(std::max(1, max_in_flight)) {}

std::string ChatClient::Complete(const ChatRequest& request, CachePolicy policy) {
  ValidateRequest(request);
  const bool use_cache = cache_ && policy == CachePolicy::kUse;
  std::string hash;
  if (use_cache) {
    hash = RequestHash(request);
    if (auto hit = cache_->Lookup(hash); hit && hit->provider_id == provider_->id()) {
      return hit->response_payload;
    }
  }
  std::string response;
  {
    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<1024>& s;
      ~Release() { s.release(); }
    } release{in_flight_};
    response = provider_->Complete(request);
  }
  if (use_cache) {
    cache_->Store({hash, response, UtcTimestamp(), provider_->id()});
  }
  return response;
}

}  // namespace kgbench
