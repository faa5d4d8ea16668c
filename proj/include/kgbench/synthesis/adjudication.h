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


#ifndef KGBENCH_SYNTHESIS_ADJUDICATION_H_
#define KGBENCH_SYNTHESIS_ADJUDICATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgbench/providers/chat.h"
#include "kgbench/synthesis/items.h"

namespace kgbench {

inline constexpr const char* kClinicalTaskLabels[] = {
    "Basic Medicine",          "Clinical Diagnosis",
    "Clinical Treatment",      "Pharmacy/Drug Safety",
    "Prevention/Epidemiology", "Medical Humanities",
};

inline constexpr const char* kReasoningTypeLabels[] = {
    "Fact Retrieval",
    "Single-hop",
    "Multi-hop",
    "Conditional Logic",
};

struct MemberVerdict {
  std::string clinical_task;
  std::string reasoning_type;
  int clarity = 0;
  int validity = 0;
  int difficulty = 0;
};

// The QA pair as shown to adjudicators.
std::string AdjudicationItemText(const QAItem& item);

ChatRequest AdjudicationRequest(const QAItem& item, const std::string& model);

// Lenient parse: the first balanced JSON object in the reply, with labels
// matched case-insensitively against the fixed category lists and integer
// scores in [1, 5].
std::optional<MemberVerdict> ParseMemberVerdict(std::string_view reply);

struct AdjudicationOptions {
  std::vector<std::string> models;  // per ensemble member; empty uses ""
  int max_output_tokens = 512;
  int parallelism = 1;
};

// Scores are arithmetic means over members with a usable verdict; labels are
// majority votes with ties going to the earliest member in ensemble order.
// Throws kAdjudication when no member yields a verdict.
QualityVerdict AdjudicateQuality(const QAItem& item, const std::vector<ChatClient*>& ensemble,
                                 const AdjudicationOptions& options = {});

struct AdjudicationSummary {
  long scored = 0;
  std::vector<std::string> unscored_qa_ids;
};

// Labels every item in place. Items no member could score keep
// clinical_task = "unscored" and no quality verdict.
AdjudicationSummary AdjudicateDataset(std::vector<QAItem>& items,
                                      const std::vector<ChatClient*>& ensemble,
                                      const AdjudicationOptions& options = {});

}  // namespace kgbench

#endif  // KGBENCH_SYNTHESIS_ADJUDICATION_H_
