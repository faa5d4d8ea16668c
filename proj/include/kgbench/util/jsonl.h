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

#ifndef KGBENCH_UTIL_JSONL_H_
#define KGBENCH_UTIL_JSONL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace kgbench {

// JSONL artifacts: UTF-8, one JSON object per line, preceded by a header line
//   {"schema": <name>, "version": <int>, "meta": {...}}
struct JsonlHeader {
  std::string schema;
  int version = 1;
  nlohmann::json meta = nlohmann::json::object();
};

struct JsonlDocument {
  JsonlHeader header;
  std::vector<nlohmann::json> records;
};

std::string RenderJsonl(const JsonlHeader& header,
                        const std::vector<nlohmann::json>& records);

void WriteJsonl(const std::filesystem::path& path, const JsonlHeader& header,
                const std::vector<nlohmann::json>& records);

// Throws kParse (with 1-based line number) on a malformed line and
// kMigration when the header names a different schema version.
JsonlDocument ReadJsonl(const std::filesystem::path& path,
                        const std::string& schema, int version);
JsonlDocument ParseJsonl(const std::string& content, const std::string& origin,
                         const std::string& schema, int version);

template <typename T>
void Snapshot(const std::vector<T>& records, const std::filesystem::path& path,
              const JsonlHeader& header) {
  std::vector<nlohmann::json> rows;
  rows.reserve(records.size());
  for (const T& r : records) rows.emplace_back(r);
  WriteJsonl(path, header, rows);
}

template <typename T>
std::vector<T> Load(const std::filesystem::path& path,
                    const std::string& schema, int version) {
  JsonlDocument doc = ReadJsonl(path, schema, version);
  std::vector<T> out;
  out.reserve(doc.records.size());
  for (const auto& row : doc.records) out.push_back(row.get<T>());
  return out;
}

// Dumps JSON with two-space indentation and a trailing newline.
std::string PrettyJson(const nlohmann::json& value);

}  // namespace kgbench

#endif  // KGBENCH_UTIL_JSONL_H_
