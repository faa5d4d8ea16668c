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

#include "kgbench/providers/mock.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgbench/providers/task.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/rng.h"
#include "kgbench/util/text.h"

namespace kgbench {
namespace {

constexpr const char* kClinicalTasks[] = {
    "Basic Medicine",          "Clinical Diagnosis",
    "Clinical Treatment",      "Pharmacy/Drug Safety",
    "Prevention/Epidemiology", "Medical Humanities",
};

std::string LastUserText(const ChatRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
    if (it->role == "user") return it->text;
  }
  return request.messages.back().text;
}

nlohmann::json Payload(const ChatRequest& request) {
  auto parsed = ExtractLastJsonObject(LastUserText(request));
  if (!parsed) Fail(ErrorKind::kProtocol, "mock provider: request has no JSON payload");
  return *parsed;
}

bool Contains(const std::string& haystack_norm, const std::string& needle) {
  const std::string n = NormalizeForMatch(needle);
  return !n.empty() && haystack_norm.find(n) != std::string::npos;
}

std::string FirstSentence(const std::string& text) {
  const std::u32string cps = DecodeUtf8(text);
  for (size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    const bool cjk_stop = c == U'。' || c == U'！' || c == U'？';
    const bool ascii_stop = (c == U'.' || c == U'!' || c == U'?') &&
                            (i + 1 == cps.size() || IsSpace(cps[i + 1]));
    if (cjk_stop || ascii_stop) return EncodeUtf8(cps.substr(0, i + 1));
  }
  return text;
}

}  // namespace

std::vector<FixtureTriplet> LoadTripletFixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kValidation, "cannot read triplet fixture " + path.string());
  std::vector<FixtureTriplet> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (NormalizeForMatch(line).empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 3) {
      Fail(ErrorKind::kParse, path.string() + ":" + std::to_string(line_no) +
                                  ": expected head<TAB>relation<TAB>tail");
    }
    out.push_back({cols[0], cols[1], cols[2]});
  }
  return out;
}

MockChatProvider::MockChatProvider(MockChatOptions options)
    : options_(std::move(options)) {}

std::string MockChatProvider::Complete(const ChatRequest& request) {
  ValidateRequest(request);
  switch (DetectTask(request)) {
    case TaskKind::kTripletExtraction: return ExtractTriplets(request);
    case TaskKind::kClusterSummary: return Summarize(request);
    case TaskKind::kVignette: return DraftVignette(request);
    case TaskKind::kQualityAdjudication: return Adjudicate(request);
    case TaskKind::kMultipleChoice: return AnswerMultipleChoice(request);
    case TaskKind::kUnknown: break;
  }
  return "mock response " + RequestHash(request).substr(0, 16);
}

std::string MockChatProvider::ExtractTriplets(const ChatRequest& request) const {
  const nlohmann::json payload = Payload(request);
  const std::string node_norm =
      NormalizeForMatch(payload.value("node_text", std::string()));
  nlohmann::json triplets = nlohmann::json::array();
  if (node_norm.empty()) return nlohmann::json{{"triplets", triplets}}.dump();
  const auto& sentences = payload.at("sentences");
  std::vector<std::string> sentence_norms;
  for (const auto& s : sentences) {
    sentence_norms.push_back(NormalizeForMatch(s.at("text").get<std::string>()));
  }
  for (const auto& t : options_.triplets) {
    if (!Contains(node_norm, t.head) || !Contains(node_norm, t.tail)) continue;
    for (size_t i = 0; i < sentences.size(); ++i) {
      if (Contains(sentence_norms[i], t.head) && Contains(sentence_norms[i], t.tail)) {
        const int index = sentences[i].at("sentence_index").get<int>();
        triplets.push_back({{"head", t.head},
                            {"relation", t.relation},
                            {"tail", t.tail},
                            {"chunk_id", sentences[i].at("chunk_id")},
                            {"sentence_start", index},
                            {"sentence_end", index}});
        break;
      }
    }
  }
  return nlohmann::json{{"triplets", triplets}}.dump();
}

std::string MockChatProvider::Summarize(const ChatRequest& request) const {
  const nlohmann::json payload = Payload(request);
  std::string out;
  for (const auto& member : payload.at("members")) {
    const std::string first = FirstSentence(member.get<std::string>());
    if (first.empty()) continue;
    if (!out.empty()) out += ' ';
    out += first;
  }
  return out.empty() ? std::string("Empty cluster.") : out;
}

std::string MockChatProvider::DraftVignette(const ChatRequest& request) const {
  const nlohmann::json payload = Payload(request);
  const uint64_t h = DigestToU64(RequestHash(request));
  const std::string context = payload.at("context_entity").get<std::string>();
  const std::string target = payload.at("target_entity").get<std::string>();
  const auto& masked = payload.at("masked_terms");
  const std::string bridge = masked.empty() ? std::string() : masked[0].get<std::string>();
  const bool zh = payload.value("language", std::string("EN")) == "ZH";
  const bool leak = static_cast<double>(h % 10000) < options_.leak_rate * 10000.0;
  const int age = 35 + static_cast<int>((h >> 20) % 45);

  std::string question;
  std::string rationale;
  if (zh) {
    question = "一名" + std::to_string(age) + "岁患者，长期患有" + context + "，前来复诊。";
    if (leak && !bridge.empty()) question += "病历提及" + bridge + "。";
    question += "检查提示存在由原发疾病驱动的中间病理过程。以下哪项最可能是其下游后果？";
    rationale = context + "导致" + bridge + "，进而引起" + target + "。";
  } else {
    question = "A " + std::to_string(age) + "-year-old patient with long-standing " +
               context + " is reviewed in clinic. ";
    if (leak && !bridge.empty()) question += "Notes mention " + bridge + ". ";
    question +=
        "Investigations point to an intermediate process driven by the underlying "
        "condition. Which of the following is the most likely downstream consequence?";
    rationale = context + " drives " + bridge + ", which in turn leads to " + target + ".";
  }
  return nlohmann::json{{"question", question}, {"rationale", rationale}}.dump();
}

std::string MockChatProvider::Adjudicate(const ChatRequest& request) const {
  const std::string item = LastUserText(request);
  const uint64_t base = DigestToU64(item);
  const uint64_t own = DigestToU64(item + "|" + options_.member_name);
  size_t task = base % 6;
  if (own % 5 == 0) task = (task + 1) % 6;
  const char* reasoning = (own >> 12) % 10 == 0 ? "Conditional Logic" : "Multi-hop";
  nlohmann::json verdict = {
      {"clinical_task", kClinicalTasks[task]},
      {"reasoning_type", reasoning},
      {"clarity_score", 4 + static_cast<int>((own >> 8) % 2)},
      {"validity_score", (own >> 16) % 4 == 0 ? 4 : 5},
      {"difficulty_score", 2 + static_cast<int>((own >> 24) % 3)}};
  return verdict.dump(2);
}

// Picks a letter from a digest of the prompt, so answers are stable per
// prompt but differ between closed-book and context-augmented runs.
std::string MockChatProvider::AnswerMultipleChoice(const ChatRequest& request) const {
  const std::string prompt = LastUserText(request);
  int n_options = 0;
  std::istringstream lines(prompt);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.size() >= 3 && line[0] == 'A' + n_options && line[1] == '.' && line[2] == ' ') {
      ++n_options;
    }
  }
  if (n_options == 0) return "I cannot tell.";
  const uint64_t h = DigestToU64(prompt + "|" + options_.member_name);
  return std::string("The answer is ") + static_cast<char>('A' + h % n_options) + ".";
}

MockEmbeddingProvider::MockEmbeddingProvider(uint64_t seed, int dimension)
    : seed_(seed), dimension_(dimension) {
  Require(dimension > 0, "mock embedding dimension must be positive");
}

std::vector<double> MockEmbeddingProvider::Direction(std::string_view key) const {
  Rng rng(DigestToU64(std::to_string(seed_) + "|" + std::string(key)));
  std::vector<double> v(dimension_);
  for (double& x : v) x = rng.Normal();
  return v;
}

EmbeddingVector MockEmbeddingProvider::EmbedOne(const std::string& text) const {
  std::vector<double> sum(dimension_, 0.0);
  for (const auto& token : TokenTexts(text, TokenMode::kWord)) {
    const auto d = Direction("tok:" + token);
    for (int i = 0; i < dimension_; ++i) sum[i] += d[i];
  }
  NormalizeInPlace(sum);
  const auto whole = Direction("text:" + text);
  const double whole_scale = 0.05 / std::sqrt(static_cast<double>(dimension_));
  for (int i = 0; i < dimension_; ++i) sum[i] += whole_scale * whole[i];
  NormalizeInPlace(sum);
  return {std::move(sum), dimension_, Sha256Hex(text)};
}

std::vector<EmbeddingVector> MockEmbeddingProvider::EmbedBatch(
    const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(EmbedOne(t));
  return out;
}

std::vector<double> MockReranker::Score(const std::string& query,
                                        const std::vector<std::string>& passages) {
  const auto query_tokens = TokenTexts(query, TokenMode::kWord);
  const std::set<std::string> query_set(query_tokens.begin(), query_tokens.end());
  std::vector<double> scores;
  scores.reserve(passages.size());
  for (const auto& p : passages) {
    const auto tokens = TokenTexts(p, TokenMode::kWord);
    const std::set<std::string> passage_set(tokens.begin(), tokens.end());
    size_t hits = 0;
    for (const auto& q : query_set) hits += passage_set.count(q);
    scores.push_back(query_set.empty() ? 0.0
                                       : static_cast<double>(hits) / query_set.size());
  }
  return scores;
}

}  // namespace kgbench
