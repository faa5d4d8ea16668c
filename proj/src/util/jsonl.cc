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

#include "kgbench/util/jsonl.h"

#include "kgbench/util/error.h"
#include "kgbench/util/files.h"

namespace kgbench {

std::string RenderJsonl(const JsonlHeader& header,
                        const std::vector<nlohmann::json>& records) {
  nlohmann::json head = {
      {"schema", header.schema}, {"version", header.version}, {"meta", header.meta}};
  std::string out = head.dump() + "\n";
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

void WriteJsonl(const std::filesystem::path& path, const JsonlHeader& header,
                const std::vector<nlohmann::json>& records) {
  WriteFileAtomic(path, RenderJsonl(header, records));
}

JsonlDocument ParseJsonl(const std::string& content, const std::string& origin,
                         const std::string& schema, int version) {
  JsonlDocument doc;
  size_t pos = 0;
  int line_no = 0;
  bool have_header = false;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      Fail(ErrorKind::kParse, origin + ":" + std::to_string(line_no) +
                                  ": malformed JSON line (" + e.what() + ")");
    }
    if (!value.is_object()) {
      Fail(ErrorKind::kParse, origin + ":" + std::to_string(line_no) +
                                  ": expected a JSON object");
    }
    if (!have_header) {
      have_header = true;
      if (!value.contains("schema") || !value.contains("version")) {
        Fail(ErrorKind::kParse, origin + ":1: missing schema header");
      }
      doc.header.schema = value.at("schema").get<std::string>();
      doc.header.version = value.at("version").get<int>();
      doc.header.meta = value.value("meta", nlohmann::json::object());
      if (doc.header.schema != schema) {
        Fail(ErrorKind::kParse, origin + ": expected schema '" + schema +
                                    "', found '" + doc.header.schema + "'");
      }
      if (doc.header.version != version) {
        Fail(ErrorKind::kMigration,
             origin + ": schema '" + schema + "' version " +
                 std::to_string(doc.header.version) + " cannot be read by version " +
                 std::to_string(version));
      }
      continue;
    }
    doc.records.push_back(std::move(value));
  }
  if (!have_header) Fail(ErrorKind::kParse, origin + ": empty file, no header");
  return doc;
}

JsonlDocument ReadJsonl(const std::filesystem::path& path,
                        const std::string& schema, int version) {
  return ParseJsonl(ReadFile(path), path.string(), schema, version);
}

std::string PrettyJson(const nlohmann::json& value) { return value.dump(2) + "\n"; }

}  // namespace kgbench
