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


#include "kgbench/synthesis/adjudication.h"

#include <map>

#include "kgbench/assets.h"
#include "kgbench/providers/task.h"
#include "kgbench/util/error.h"
#include "kgbench/util/parallel.h"
#include "kgbench/util/text.h"

namespace kgbench {
namespace {

template <size_t N>
std::optional<std::string> MatchLabel(const nlohmann::json& value, const char* const (&labels)[N]) {
  if (!value.is_string()) return std::nullopt;
  const std::string got = NormalizeForMatch(value.get<std::string>());
  for (const char* label : labels) {
    if (NormalizeForMatch(label) == got) return std::string(label);
  }
  return std::nullopt;
}

std::optional<int> Score(const nlohmann::json& object, const char* key) {
  if (!object.contains(key)) return std::nullopt;
  const auto& v = object[key];
  double x = 0;
  if (v.is_number()) {
    x = v.get<double>();
  } else if (v.is_string()) {
    try {
      size_t used = 0;
      x = std::stod(v.get<std::string>(), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  if (x != static_cast<int>(x) || x < 1 || x > 5) return std::nullopt;
  return static_cast<int>(x);
}

std::string Letter(size_t i) { return std::string(1, static_cast<char>('A' + i)); }

}  // namespace

std::string AdjudicationItemText(const QAItem& item) {
  std::string text = "Question: " + item.question + "\nOptions:\n";
  for (size_t i = 0; i < item.options.size(); ++i) {
    text += Letter(i) + ". " + item.options[i] + "\n";
  }
  text += "Correct answer: " + Letter(static_cast<size_t>(item.answer_index)) + "\n";
  text += "Rationale: " + item.rationale;
  return text;
}

ChatRequest AdjudicationRequest(const QAItem& item, const std::string& model) {
  ChatRequest request;
  request.messages = {{"system", std::string(assets::kQualityPrompt)},
                      {"user", AdjudicationItemText(item)}};
  request.temperature = 0.0;
  request.max_output_tokens = 512;
  request.model_name = model;
  return request;
}

std::optional<MemberVerdict> ParseMemberVerdict(std::string_view reply) {
  const auto parsed = ExtractJsonObject(reply);
  if (!parsed) return std::nullopt;
  MemberVerdict v;
  const auto task = parsed->contains("clinical_task")
                        ? MatchLabel((*parsed)["clinical_task"], kClinicalTaskLabels)
                        : std::nullopt;
  const auto reasoning = parsed->contains("reasoning_type")
                             ? MatchLabel((*parsed)["reasoning_type"], kReasoningTypeLabels)
                             : std::nullopt;
  const auto clarity = Score(*parsed, "clarity_score");
  const auto validity = Score(*parsed, "validity_score");
  const auto difficulty = Score(*parsed, "difficulty_score");
  if (!task || !reasoning || !clarity || !validity || !difficulty) return std::nullopt;
  return MemberVerdict{*task, *reasoning, *clarity, *validity, *difficulty};
}

QualityVerdict AdjudicateQuality(const QAItem& item, const std::vector<ChatClient*>& ensemble,
                                 const AdjudicationOptions& options) {
  Require(!ensemble.empty(), "adjudication ensemble is empty");
  std::vector<MemberVerdict> verdicts;
  QualityVerdict out;
  for (size_t m = 0; m < ensemble.size(); ++m) {
    const std::string model = m < options.models.size() ? options.models[m] : std::string();
    ChatRequest request = AdjudicationRequest(item, model);
    request.max_output_tokens = options.max_output_tokens;
    std::string reply = ensemble[m]->Complete(request);
    auto verdict = ParseMemberVerdict(reply);
    if (!verdict) {
      request.messages.push_back({"assistant", reply});
      request.messages.push_back(
          {"user", "Your reply could not be parsed. Output EXACTLY the requested JSON object "
                   "and nothing else."});
      reply = ensemble[m]->Complete(request);
      verdict = ParseMemberVerdict(reply);
    }
    const std::string id = ensemble[m]->provider().id();
    if (!verdict) {
      out.failed_members.push_back(id);
      continue;
    }
    out.members.push_back(id);
    verdicts.push_back(*verdict);
  }
  if (verdicts.empty()) {
    Fail(ErrorKind::kAdjudication,
         "item " + item.qa_id + ": no ensemble member returned a usable verdict");
  }
  auto majority = [&](auto field) {
    std::map<std::string, int> votes;
    int best = 0;
    for (const auto& v : verdicts) best = std::max(best, ++votes[v.*field]);
    for (const auto& v : verdicts) {
      if (votes[v.*field] == best) return v.*field;
    }
    return std::string();
  };
  out.clinical_task = majority(&MemberVerdict::clinical_task);
  out.reasoning_type = majority(&MemberVerdict::reasoning_type);
  const double n = static_cast<double>(verdicts.size());
  for (const auto& v : verdicts) {
    out.clarity += v.clarity / n;
    out.validity += v.validity / n;
    out.difficulty += v.difficulty / n;
  }
  return out;
}

AdjudicationSummary AdjudicateDataset(std::vector<QAItem>& items,
                                      const std::vector<ChatClient*>& ensemble,
                                      const AdjudicationOptions& options) {
  Require(!ensemble.empty(), "adjudication ensemble is empty");
  std::vector<std::optional<QualityVerdict>> verdicts(items.size());
  ParallelFor(items.size(), static_cast<size_t>(options.parallelism), [&](size_t i) {
    try {
      verdicts[i] = AdjudicateQuality(items[i], ensemble, options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kAdjudication) throw;
    }
  });
  AdjudicationSummary summary;
  for (size_t i = 0; i < items.size(); ++i) {
    if (verdicts[i]) {
      items[i].clinical_task = verdicts[i]->clinical_task;
      items[i].quality = std::move(verdicts[i]);
      ++summary.scored;
    } else {
      items[i].clinical_task = kUnscoredTask;
      items[i].quality.reset();
      summary.unscored_qa_ids.push_back(items[i].qa_id);
    }
  }
  return summary;
}

}  // namespace kgbench
