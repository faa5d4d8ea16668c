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

#include "kgbench/providers/task.h"

namespace kgbench {

TaskKind DetectTask(const ChatRequest& request) {
  for (const auto& m : request.messages) {
    const std::string_view t = m.text;
    if (t.starts_with(kTripletTaskHeader)) return TaskKind::kTripletExtraction;
    if (t.starts_with(kSummaryTaskHeader)) return TaskKind::kClusterSummary;
    if (t.starts_with(kVignetteTaskHeader)) return TaskKind::kVignette;
    if (t.starts_with(kMultipleChoiceTaskHeader)) return TaskKind::kMultipleChoice;
    if (t.find(kAdjudicatorMarker) != std::string_view::npos) {
      return TaskKind::kQualityAdjudication;
    }
  }
  return TaskKind::kUnknown;
}

namespace {

// End offset (inclusive) of the balanced object opening at `start`, or npos.
size_t MatchBrace(std::string_view text, size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return i;
    }
  }
  return std::string_view::npos;
}

std::optional<nlohmann::json> ParseObject(std::string_view text) {
  auto parsed = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  return std::nullopt;
}

}  // namespace

std::optional<nlohmann::json> ExtractJsonObject(std::string_view text) {
  for (size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    const size_t end = MatchBrace(text, start);
    if (end == std::string_view::npos) continue;
    if (auto parsed = ParseObject(text.substr(start, end - start + 1))) return parsed;
  }
  return std::nullopt;
}

std::optional<nlohmann::json> ExtractLastJsonObject(std::string_view text) {
  std::optional<nlohmann::json> last;
  size_t start = text.find('{');
  while (start != std::string_view::npos) {
    const size_t end = MatchBrace(text, start);
    std::optional<nlohmann::json> parsed;
    if (end != std::string_view::npos) parsed = ParseObject(text.substr(start, end - start + 1));
    if (parsed) {
      last = std::move(parsed);
      start = text.find('{', end + 1);
    } else {
      start = text.find('{', start + 1);
    }
  }
  return last;
}

}  // namespace kgbench
