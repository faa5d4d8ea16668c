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

#include "kgbench/kg/alignment.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "kgbench/util/error.h"

namespace kgbench {

int DamerauLevenshtein(std::string_view s1, std::string_view s2) {
  const std::u32string a = DecodeUtf8(s1);
  const std::u32string b = DecodeUtf8(s2);
  const size_t n = a.size();
  const size_t m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

int ThetaSchedule::ThetaFor(int length) const {
  for (const auto& [max_length, theta] : steps) {
    if (length <= max_length) return theta;
  }
  return above;
}

void ThetaSchedule::Validate() const {
  int last_len = std::numeric_limits<int>::min();
  int last_theta = 0;
  for (const auto& [max_length, theta] : steps) {
    Require(max_length > last_len, "theta schedule lengths must increase");
    Require(theta >= last_theta && theta >= 0, "theta schedule must be non-decreasing");
    last_len = max_length;
    last_theta = theta;
  }
  Require(above >= last_theta, "theta schedule must be non-decreasing");
}

ThetaSchedule ParseThetaSchedule(std::string_view text) {
  ThetaSchedule out;
  out.steps.clear();
  bool saw_inf = false;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t colon = item.find(':');
    Require(colon != std::string::npos, "theta schedule entry '" + item + "' needs len:theta");
    const std::string len = NormalizeForMatch(item.substr(0, colon));
    const std::string theta = NormalizeForMatch(item.substr(colon + 1));
    try {
      if (len == "inf") {
        out.above = std::stoi(theta);
        saw_inf = true;
      } else {
        Require(!saw_inf, "theta schedule 'inf' entry must come last");
        out.steps.emplace_back(std::stoi(len), std::stoi(theta));
      }
    } catch (const std::logic_error&) {
      Fail(ErrorKind::kValidation, "bad theta schedule entry '" + item + "'");
    }
  }
  Require(saw_inf, "theta schedule needs a final inf:<theta> entry");
  out.Validate();
  return out;
}

std::string FormatThetaSchedule(const ThetaSchedule& schedule) {
  std::string out;
  for (const auto& [len, theta] : schedule.steps) {
    out += std::to_string(len) + ":" + std::to_string(theta) + ",";
  }
  return out + "inf:" + std::to_string(schedule.above);
}

void MentionVocabulary::Add(std::string_view surface, const std::string& entity_id) {
  std::vector<std::string> key = TokenTexts(surface, mode_);
  if (key.empty()) return;
  longest_ = std::max(longest_, key.size());
  forms_.emplace(std::move(key), entity_id);
}

namespace {

// Byte offset -> code point offset for every token boundary.
size_t CodePointOffset(std::string_view text, size_t byte) {
  return CodePointCount(text.substr(0, byte));
}

}  // namespace

std::vector<AlignmentMatch> MentionVocabulary::AlignMaxMatch(std::string_view text) const {
  std::vector<AlignmentMatch> out;
  if (forms_.empty()) return out;
  const std::vector<Token> tokens = Tokenize(text, mode_);
  size_t i = 0;
  while (i < tokens.size()) {
    size_t matched = 0;
    const std::string* entity = nullptr;
    const size_t max_len = std::min(longest_, tokens.size() - i);
    std::vector<std::string> window;
    for (size_t k = 0; k < max_len; ++k) window.push_back(tokens[i + k].text);
    for (size_t len = max_len; len >= 1; --len) {
      window.resize(len);
      auto it = forms_.find(window);
      if (it != forms_.end()) {
        matched = len;
        entity = &it->second;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    const size_t begin = tokens[i].begin;
    const size_t end = tokens[i + matched - 1].end;
    out.push_back({std::string(text.substr(begin, end - begin)), *entity,
                   CodePointOffset(text, begin), CodePointOffset(text, end)});
    i += matched;
  }
  return out;
}

bool ContainsSurface(std::string_view text, std::string_view surface, TokenMode mode) {
  const std::vector<std::string> needle = TokenTexts(surface, mode);
  if (needle.empty()) return false;
  const std::vector<std::string> hay = TokenTexts(text, mode);
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::optional<MergeResult> FuzzyMerge(std::string_view candidate,
                                      const std::vector<MergeCandidate>& vocabulary,
                                      const ThetaSchedule& schedule) {
  const std::string cand = NormalizeForMatch(candidate);
  if (cand.empty()) return std::nullopt;
  const int theta = schedule.ThetaFor(static_cast<int>(CodePointCount(cand)));
  std::optional<MergeResult> best;
  const MergeCandidate* best_entity = nullptr;
  for (const auto& entity : vocabulary) {
    int distance = std::numeric_limits<int>::max();
    std::string surface;
    for (const auto& s : entity.surfaces) {
      const std::string norm = NormalizeForMatch(s);
      // Length gap is a lower bound on the distance.
      const long gap = std::labs(static_cast<long>(CodePointCount(norm)) -
                                 static_cast<long>(CodePointCount(cand)));
      if (gap > theta || gap >= distance) continue;
      const int dl = DamerauLevenshtein(cand, norm);
      if (dl < distance) {
        distance = dl;
        surface = s;
      }
    }
    if (distance > theta) continue;
    const bool better =
        !best || distance < best->distance ||
        (distance == best->distance &&
         (entity.frequency > best_entity->frequency ||
          (entity.frequency == best_entity->frequency &&
           entity.canonical_name < best_entity->canonical_name)));
    if (better) {
      best = MergeResult{entity.entity_id, distance, surface};
      best_entity = &entity;
    }
  }
  return best;
}

}  // namespace kgbench
