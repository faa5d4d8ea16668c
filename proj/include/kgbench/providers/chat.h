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

#ifndef KGBENCH_PROVIDERS_CHAT_H_
#define KGBENCH_PROVIDERS_CHAT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "json.hpp"

namespace kgbench {

struct ChatMessage {
  std::string role;
  std::string text;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::string model_name;
  std::optional<int64_t> seed;
};

// Throws kValidation on an empty message list, an empty role, a negative
// temperature or a non-positive token budget.
void ValidateRequest(const ChatRequest& request);

// Key-sorted JSON form of the full request; the cache key is its SHA-256.
nlohmann::json CanonicalJson(const ChatRequest& request);
std::string RequestHash(const ChatRequest& request);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string id() const = 0;
  // Returns the assistant text. Implementations throw kTransport, kProtocol
  // or kProvider errors.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

enum class CachePolicy { kUse, kBypass };

class ResponseCache;

// Shareable front end over a provider: validates requests, consults the
// response cache and bounds the number of in-flight provider calls.
class ChatClient {
 public:
  ChatClient(std::shared_ptr<ChatProvider> provider,
             std::shared_ptr<ResponseCache> cache, int max_in_flight = 4);

  std::string Complete(const ChatRequest& request,
                       CachePolicy policy = CachePolicy::kUse);

  const ChatProvider& provider() const { return *provider_; }

 private:
  std::shared_ptr<ChatProvider> provider_;
  std::shared_ptr<ResponseCache> cache_;
  std::counting_semaphore<1024> in_flight_;
};

}  // namespace kgbench

#endif  // KGBENCH_PROVIDERS_CHAT_H_
