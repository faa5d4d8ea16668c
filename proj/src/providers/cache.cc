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

#include "kgbench/providers/cache.h"

#include <chrono>
#include <ctime>
#include <mutex>

#include "json.hpp"
#include "kgbench/util/files.h"

namespace kgbench {

ResponseCache::ResponseCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ResponseCache::PathFor(const std::string& request_hash) const {
  return root_ / request_hash.substr(0, 2) / (request_hash + ".json");
}

std::optional<CacheEntry> ResponseCache::Lookup(const std::string& request_hash) const {
  std::shared_lock lock(mu_);
  const auto path = PathFor(request_hash);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(ReadFile(path));
    CacheEntry entry;
    entry.request_hash = j.at("request_hash").get<std::string>();
    entry.response_payload = j.at("response_payload").get<std::string>();
    entry.created_at = j.at("created_at").get<std::string>();
    entry.provider_id = j.at("provider_id").get<std::string>();
    if (entry.request_hash != request_hash) return std::nullopt;
    return entry;
  } catch (const nlohmann::json::exception&) {
    // A corrupt entry is treated as a miss and overwritten on the next store.
    return std::nullopt;
  }
}

void ResponseCache::Store(const CacheEntry& entry) {
  std::unique_lock lock(mu_);
  nlohmann::json j = {{"request_hash", entry.request_hash},
                      {"response_payload", entry.response_payload},
                      {"created_at", entry.created_at},
                      {"provider_id", entry.provider_id}};
  WriteFileAtomic(PathFor(entry.request_hash),
                  j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace kgbench
