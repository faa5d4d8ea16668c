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


#ifndef KGBENCH_EVAL_METRICS_H_
#define KGBENCH_EVAL_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/eval/harness.h"
#include "kgbench/synthesis/items.h"

namespace kgbench {

struct HneResult {
  double rate = 0.0;
  long errors = 0;               // |E_wrong|, unparseable included
  long hard_negative_picks = 0;  // never counts unparseable outcomes
};

// Throws kUndefinedRate when there are no errors.
HneResult ComputeHne(const std::vector<EvalOutcome>& zero_shot, const std::vector<QAItem>& items);

struct R3Result {
  double rate = 0.0;
  long zero_shot_errors = 0;
  long recovered = 0;
};

// Throws kValidation when the qa_id sets differ, kUndefinedRate when there
// are no zero-shot errors.
R3Result ComputeR3(const std::vector<EvalOutcome>& zero_shot, const std::vector<EvalOutcome>& rag);

struct SplitAccuracy {
  long items = 0;
  long correct = 0;
  long unparseable = 0;
  double accuracy = 0.0;
};

struct BehavioralReport {
  std::string model_id;
  std::string prompt_template = kPromptTemplateId;
  SplitAccuracy zero_shot;
  std::map<std::string, SplitAccuracy> zero_shot_splits;  // "EN/easy", ...
  std::optional<SplitAccuracy> rag;
  std::map<std::string, SplitAccuracy> rag_splits;
  long total_errors = 0;
  long unparseable_count = 0;
  std::optional<HneResult> hne;
  std::optional<R3Result> r3;
  std::map<std::string, std::optional<HneResult>> hne_splits;
  std::map<std::string, std::optional<R3Result>> r3_splits;
};

BehavioralReport MakeBehavioralReport(const std::string& model_id,
                                      const std::vector<EvalOutcome>& zero_shot,
                                      const std::vector<EvalOutcome>* rag,
                                      const std::vector<QAItem>& items);

// Rates are stored as fractions and as percentages rounded to two places;
// undefined rates are null with a "—" display string.
nlohmann::json BehavioralReportJson(const BehavioralReport& report);

// Rows shaped like "Model | Total Zero-Shot Errors | HNE Rate | R³ Rate".
std::string RenderBehavioralTable(const std::vector<BehavioralReport>& reports);

// Pearson chi-square goodness of fit against the uniform distribution.
double ChiSquareUniformPValue(const std::vector<long>& counts);

}  // namespace kgbench

#endif  // KGBENCH_EVAL_METRICS_H_
