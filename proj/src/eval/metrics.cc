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


#include "kgbench/eval/metrics.h"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <set>

#include "kgbench/assets.h"
#include "kgbench/synthesis/stats.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"

namespace kgbench {
namespace {

std::map<std::string, const QAItem*> ItemIndex(const std::vector<QAItem>& items) {
  std::map<std::string, const QAItem*> index;
  for (const auto& item : items) {
    Require(index.emplace(item.qa_id, &item).second, "duplicate qa_id " + item.qa_id);
  }
  return index;
}

void RequireMode(const std::vector<EvalOutcome>& outcomes, EvalMode mode) {
  for (const auto& o : outcomes) {
    Require(o.mode == mode, "outcome " + o.qa_id + " has mode " + EvalModeName(o.mode) +
                                ", expected " + EvalModeName(mode));
    Require(o.model_id == outcomes.front().model_id, "outcomes mix models " +
                                                         outcomes.front().model_id + " and " +
                                                         o.model_id);
  }
}

std::map<std::string, const EvalOutcome*> OutcomeIndex(const std::vector<EvalOutcome>& outcomes) {
  std::map<std::string, const EvalOutcome*> index;
  for (const auto& o : outcomes) {
    Require(index.emplace(o.qa_id, &o).second, "duplicate outcome for " + o.qa_id);
  }
  return index;
}

SplitAccuracy Accuracy(const std::vector<const EvalOutcome*>& outcomes) {
  SplitAccuracy a;
  for (const EvalOutcome* o : outcomes) {
    ++a.items;
    a.correct += o->correct ? 1 : 0;
    a.unparseable += o->parsed_choice ? 0 : 1;
  }
  a.accuracy = a.items > 0 ? static_cast<double>(a.correct) / a.items : 0.0;
  return a;
}

double Percent(double rate) { return std::round(rate * 10000.0) / 100.0; }

std::string Display(std::optional<double> rate) {
  if (!rate) return "—";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", Percent(*rate));
  return buf;
}

nlohmann::json AccuracyJson(const SplitAccuracy& a) {
  return {{"items", a.items},
          {"correct", a.correct},
          {"unparseable", a.unparseable},
          {"accuracy", a.accuracy},
          {"accuracy_percent", Percent(a.accuracy)}};
}

nlohmann::json HneJson(const std::optional<HneResult>& h, long errors) {
  if (!h) return {{"errors", errors}, {"hard_negative_picks", 0}, {"rate", nullptr},
                  {"rate_percent", nullptr}, {"display", Display(std::nullopt)}};
  return {{"errors", h->errors},
          {"hard_negative_picks", h->hard_negative_picks},
          {"rate", h->rate},
          {"rate_percent", Percent(h->rate)},
          {"display", Display(h->rate)}};
}

nlohmann::json R3Json(const std::optional<R3Result>& r) {
  if (!r) return {{"rate", nullptr}, {"rate_percent", nullptr}, {"display", Display(std::nullopt)}};
  return {{"zero_shot_errors", r->zero_shot_errors},
          {"recovered", r->recovered},
          {"rate", r->rate},
          {"rate_percent", Percent(r->rate)},
          {"display", Display(r->rate)}};
}

template <typename Fn>
auto Defined(Fn&& fn) -> std::optional<decltype(fn())> {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUndefinedRate) throw;
    return std::nullopt;
  }
}

}  // namespace

HneResult ComputeHne(const std::vector<EvalOutcome>& zero_shot, const std::vector<QAItem>& items) {
  RequireMode(zero_shot, EvalMode::kZeroShot);
  const auto index = ItemIndex(items);
  OutcomeIndex(zero_shot);
  HneResult r;
  for (const auto& o : zero_shot) {
    auto it = index.find(o.qa_id);
    Require(it != index.end(), "outcome for unknown item " + o.qa_id);
    if (o.correct) continue;
    ++r.errors;
    if (o.parsed_choice && *o.parsed_choice == it->second->hard_negative_index) {
      ++r.hard_negative_picks;
    }
  }
  if (r.errors == 0) Fail(ErrorKind::kUndefinedRate, "HNE is undefined: no zero-shot errors");
  r.rate = static_cast<double>(r.hard_negative_picks) / static_cast<double>(r.errors);
  return r;
}

R3Result ComputeR3(const std::vector<EvalOutcome>& zero_shot, const std::vector<EvalOutcome>& rag) {
  RequireMode(zero_shot, EvalMode::kZeroShot);
  RequireMode(rag, EvalMode::kRag);
  const auto zero_index = OutcomeIndex(zero_shot);
  const auto rag_index = OutcomeIndex(rag);
  Require(zero_index.size() == rag_index.size(),
          "zero-shot and rag outcomes cover different item sets");
  for (const auto& [qa_id, _] : zero_index) {
    Require(rag_index.count(qa_id) > 0, "item " + qa_id + " has no rag outcome");
  }
  R3Result r;
  for (const auto& [qa_id, o] : zero_index) {
    if (o->correct) continue;
    ++r.zero_shot_errors;
    if (rag_index.at(qa_id)->correct) ++r.recovered;
  }
  if (r.zero_shot_errors == 0) Fail(ErrorKind::kUndefinedRate, "R3 is undefined: no zero-shot errors");
  r.rate = static_cast<double>(r.recovered) / static_cast<double>(r.zero_shot_errors);
  return r;
}

BehavioralReport MakeBehavioralReport(const std::string& model_id,
                                      const std::vector<EvalOutcome>& zero_shot,
                                      const std::vector<EvalOutcome>* rag,
                                      const std::vector<QAItem>& items) {
  const auto index = ItemIndex(items);
  BehavioralReport report;
  report.model_id = model_id;

  std::map<std::string, std::vector<EvalOutcome>> zero_by_split, rag_by_split;
  std::vector<const EvalOutcome*> zero_all, rag_all;
  std::map<std::string, std::vector<const EvalOutcome*>> zero_ptr, rag_ptr;
  for (const auto& o : zero_shot) {
    auto it = index.find(o.qa_id);
    Require(it != index.end(), "outcome for unknown item " + o.qa_id);
    const std::string key = SplitKey(*it->second);
    zero_by_split[key].push_back(o);
    zero_ptr[key].push_back(&o);
    zero_all.push_back(&o);
  }
  report.zero_shot = Accuracy(zero_all);
  for (const auto& [key, list] : zero_ptr) report.zero_shot_splits[key] = Accuracy(list);
  report.total_errors = report.zero_shot.items - report.zero_shot.correct;
  report.unparseable_count = report.zero_shot.unparseable;
  report.hne = Defined([&] { return ComputeHne(zero_shot, items); });
  for (const auto& [key, list] : zero_by_split) {
    report.hne_splits[key] = Defined([&] { return ComputeHne(list, items); });
  }
  if (rag != nullptr) {
    for (const auto& o : *rag) {
      auto it = index.find(o.qa_id);
      Require(it != index.end(), "outcome for unknown item " + o.qa_id);
      const std::string key = SplitKey(*it->second);
      rag_by_split[key].push_back(o);
      rag_ptr[key].push_back(&o);
      rag_all.push_back(&o);
    }
    report.rag = Accuracy(rag_all);
    for (const auto& [key, list] : rag_ptr) report.rag_splits[key] = Accuracy(list);
    report.unparseable_count += report.rag->unparseable;
    report.r3 = Defined([&] { return ComputeR3(zero_shot, *rag); });
    for (const auto& [key, list] : zero_by_split) {
      report.r3_splits[key] = Defined([&] { return ComputeR3(list, rag_by_split[key]); });
    }
  }
  return report;
}

nlohmann::json BehavioralReportJson(const BehavioralReport& report) {
  nlohmann::json zero_splits = nlohmann::json::object();
  for (const auto& [key, a] : report.zero_shot_splits) zero_splits[key] = AccuracyJson(a);
  nlohmann::json splits = nlohmann::json::object();
  for (const auto& [key, h] : report.hne_splits) {
    const auto& a = report.zero_shot_splits.at(key);
    splits[key]["hne"] = HneJson(h, a.items - a.correct);
  }
  for (const auto& [key, r] : report.r3_splits) splits[key]["r3"] = R3Json(r);
  nlohmann::json j = {
      {"model_id", report.model_id},
      {"prompt_template", report.prompt_template},
      {"prompt_template_sha256", Sha256Hex(assets::kMultipleChoicePromptV1)},
      {"zero_shot", AccuracyJson(report.zero_shot)},
      {"zero_shot_splits", zero_splits},
      {"total_zero_shot_errors", report.total_errors},
      {"unparseable_count", report.unparseable_count},
      {"hne", HneJson(report.hne, report.total_errors)},
      {"r3", R3Json(report.r3)},
      {"behavioral_splits", splits},
      {"table", RenderBehavioralTable({report})}};
  if (report.rag) {
    nlohmann::json rag_splits = nlohmann::json::object();
    for (const auto& [key, a] : report.rag_splits) rag_splits[key] = AccuracyJson(a);
    j["rag"] = AccuracyJson(*report.rag);
    j["rag_splits"] = rag_splits;
  }
  return j;
}

std::string RenderBehavioralTable(const std::vector<BehavioralReport>& reports) {
  std::string out = "| Model | Total Zero-Shot Errors | HNE Rate | R³ Rate |\n";
  out += "|---|---|---|---|\n";
  for (const auto& r : reports) {
    out += "| " + r.model_id + " | " + std::to_string(r.total_errors) + " | " +
           Display(r.hne ? std::optional<double>(r.hne->rate) : std::nullopt) + " | " +
           Display(r.r3 ? std::optional<double>(r.r3->rate) : std::nullopt) + " |\n";
  }
  return out;
}

double ChiSquareUniformPValue(const std::vector<long>& counts) {
  Require(counts.size() >= 2, "chi-square needs at least two categories");
  long total = 0;
  for (long c : counts) total += c;
  Require(total > 0, "chi-square needs observations");
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (long c : counts) stat += (c - expected) * (c - expected) / expected;
  return boost::math::gamma_q(0.5 * static_cast<double>(counts.size() - 1), 0.5 * stat);
}

}  // namespace kgbench
