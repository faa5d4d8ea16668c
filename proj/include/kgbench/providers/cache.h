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

#ifndef KGBENCH_PROVIDERS_CACHE_H_
#define KGBENCH_PROVIDERS_CACHE_H_

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>

namespace kgbench {

struct CacheEntry {
  std::string request_hash;
  std::string response_payload;
  std::string created_at;  // ISO-8601 UTC
  std::string provider_id;
};

// Directory of content-addressed files: <root>/<hash[0:2]>/<hash>.json.
// Reads run concurrently; writes are serialized and land atomically.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path root);

  std::optional<CacheEntry> Lookup(const std::string& request_hash) const;
  void Store(const CacheEntry& entry);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path PathFor(const std::string& request_hash) const;

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
};

std::string UtcTimestamp();

}  // namespace kgbench

#endif  // KGBENCH_PROVIDERS_CACHE_H_
