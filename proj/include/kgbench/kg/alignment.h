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

#ifndef KGBENCH_KG_ALIGNMENT_H_
#define KGBENCH_KG_ALIGNMENT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgbench/util/text.h"

namespace kgbench {

// Optimal string alignment distance over Unicode code points with unit
// costs for insertion, deletion, substitution and adjacent transposition.
int DamerauLevenshtein(std::string_view s1, std::string_view s2);

// Step function from candidate length (code points) to the largest accepted
// edit distance. Steps are (max_length, theta) pairs sorted by max_length;
// lengths above the last step use `above`.
struct ThetaSchedule {
  std::vector<std::pair<int, int>> steps = {{3, 0}, {7, 1}, {12, 2}};
  int above = 3;

  int ThetaFor(int length) const;
  void Validate() const;  // increasing lengths, non-decreasing thetas
};

// Parses "3:0,7:1,12:2,inf:3".
ThetaSchedule ParseThetaSchedule(std::string_view text);
std::string FormatThetaSchedule(const ThetaSchedule& schedule);

struct AlignmentMatch {
  std::string surface;    // source text of the match
  std::string entity_id;
  size_t char_begin = 0;  // code point offsets into the input, end exclusive
  size_t char_end = 0;
};

// Surface forms keyed by their normalized token sequence.
class MentionVocabulary {
 public:
  explicit MentionVocabulary(TokenMode mode) : mode_(mode) {}

  // Later additions of the same token sequence keep the first entity.
  void Add(std::string_view surface, const std::string& entity_id);
  bool empty() const { return forms_.empty(); }
  TokenMode mode() const { return mode_; }

  // Greedy left-to-right longest match; unmatched tokens are skipped and
  // matches never overlap.
  std::vector<AlignmentMatch> AlignMaxMatch(std::string_view text) const;

 private:
  TokenMode mode_;
  std::map<std::vector<std::string>, std::string> forms_;
  size_t longest_ = 0;
};

// True when the token sequence of `surface` occurs contiguously in `text`.
bool ContainsSurface(std::string_view text, std::string_view surface, TokenMode mode);

struct MergeCandidate {
  std::string entity_id;
  std::string canonical_name;
  std::vector<std::string> surfaces;  // canonical name and aliases
  long frequency = 0;
};

struct MergeResult {
  std::string entity_id;
  int distance = 0;
  std::string matched_surface;
};

// Entity whose closest surface form is within theta(len(candidate)) edits.
// Ties: smaller distance, then higher frequency, then canonical name.
// Comparison is on NormalizeForMatch forms.
std::optional<MergeResult> FuzzyMerge(std::string_view candidate,
                                      const std::vector<MergeCandidate>& vocabulary,
                                      const ThetaSchedule& schedule);

}  // namespace kgbench

#endif  // KGBENCH_KG_ALIGNMENT_H_
