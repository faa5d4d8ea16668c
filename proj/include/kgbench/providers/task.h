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

#ifndef KGBENCH_PROVIDERS_TASK_H_
#define KGBENCH_PROVIDERS_TASK_H_

#include <optional>
#include <string_view>

#include "json.hpp"
#include "kgbench/providers/chat.h"

namespace kgbench {

// Header lines that open each pipeline prompt. The mock provider dispatches
// on them; real providers simply read them as part of the instructions.
inline constexpr std::string_view kTripletTaskHeader =
    "TASK: knowledge-triplet-extraction";
inline constexpr std::string_view kSummaryTaskHeader = "TASK: cluster-summary";
inline constexpr std::string_view kVignetteTaskHeader =
    "TASK: masked-vignette-synthesis";
inline constexpr std::string_view kMultipleChoiceTaskHeader =
    "TASK: multiple-choice-answer";
// The adjudication prompt is used verbatim and has no header of its own.
inline constexpr std::string_view kAdjudicatorMarker =
    "expert medical adjudicator and taxonomist";

enum class TaskKind {
  kTripletExtraction,
  kClusterSummary,
  kVignette,
  kQualityAdjudication,
  kMultipleChoice,
  kUnknown,
};

TaskKind DetectTask(const ChatRequest& request);

// First balanced {...} object in `text` that parses as JSON. Tolerates prose
// before and after, and braces inside string literals.
std::optional<nlohmann::json> ExtractJsonObject(std::string_view text);

// Last top-level object that parses; prompts place their payload after any
// format examples.
std::optional<nlohmann::json> ExtractLastJsonObject(std::string_view text);

}  // namespace kgbench

#endif  // KGBENCH_PROVIDERS_TASK_H_
