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


#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "kgbench/providers/mock.h"
#include "kgbench/synthesis/adjudication.h"
#include "kgbench/synthesis/chains.h"
#include "kgbench/synthesis/items.h"
#include "kgbench/synthesis/stats.h"
#include "kgbench/util/error.h"
#include "kgbench/util/rng.h"
#include "oracles.h"

namespace kgbench {
namespace {

using testing::ClusteredWorld;
using testing::CountingChat;
using testing::MakeWorld;
using testing::MockChat;
using testing::World;

KnowledgeGraph Bare(int n, const std::vector<std::pair<int, int>>& links) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("node" + std::string(1, static_cast<char>('a' + i)));
  return MakeWorld(names, links).graph;
}

std::string Id(int i) { return "N" + std::to_string(1000 + i); }

KnowledgeGraph ShatteredToy() {
  return Shatter(testing::ToyDiabetesGraph(), std::nullopt, ParseStoplist("Blood\n", "toy"));
}

World ToyWorld() {
  return MakeWorld({"Type 2 Diabetes", "Blood", "Fracture risk", "AGEs accumulation",
                    "Osteoblast suppression", "Impaired Bone Quality", "Sorbitol Accumulation",
                    "Schwann Cell Damage"},
                   {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 5}, {5, 2}, {0, 6}, {6, 7}});
}

World ShatteredToyWorld() {
  World w = ToyWorld();
  w.graph = Shatter(w.graph, std::nullopt, ParseStoplist("Blood\n", "toy"));
  return w;
}

TEST(ChainTest, DirectedTriangleHasOneChain) {
  const auto chains = MineChains(Bare(3, {{0, 1}, {1, 2}, {0, 2}}));
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].a, Id(0));
  EXPECT_EQ(chains[0].e_bridge, Id(1));
  EXPECT_EQ(chains[0].b, Id(2));
  EXPECT_EQ(chains[0].chain_id, ChainId(Id(0), Id(1), Id(2)));
}

TEST(ChainTest, ToyShatteredGraphHasAgesChain) {
  const auto chains = MineChains(ShatteredToy());
  bool found = false;
  for (const auto& c : chains) {
    found |= c.a == "T0" && c.e_bridge == "T3" && c.b == "T4";
    EXPECT_NE(c.e_bridge, "T1");  // pruned hub carries no chain
  }
  EXPECT_TRUE(found);
}

TEST(ChainTest, EmptyGraphGivesNoChains) {
  EXPECT_TRUE(MineChains(KnowledgeGraph()).empty());
}

TEST(ChainTest, RandomGraphsMatchTripleScan) {
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed);
    const int n = 3 + static_cast<int>(rng.Uniform(13));
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::vector<std::pair<int, int>> links;
    const int m = static_cast<int>(rng.Uniform(3 * n));
    for (int k = 0; k < m; ++k) {
      const int h = static_cast<int>(rng.Uniform(n));
      const int t = static_cast<int>(rng.Uniform(n));
      if (h == t) continue;
      links.emplace_back(h, t);  // duplicates exercise deduplication
      adj[h][t] = true;
    }
    std::set<std::tuple<std::string, std::string, std::string>> expected;
    for (int a = 0; a < n; ++a)
      for (int e = 0; e < n; ++e)
        for (int b = 0; b < n; ++b)
          if (a != b && adj[a][e] && adj[e][b]) expected.insert({Id(a), Id(e), Id(b)});
    std::set<std::tuple<std::string, std::string, std::string>> got;
    const auto chains = MineChains(Bare(n, links));
    for (const auto& c : chains) got.insert({c.a, c.e_bridge, c.b});
    EXPECT_EQ(got.size(), chains.size()) << "duplicate chain, seed " << seed;
    EXPECT_EQ(got, expected) << "seed " << seed;
  }
}

TEST(ChainTest, PerSourceAndGlobalCaps) {
  // 0 -> {1,2}, 1 -> {3,4}, 2 -> {3,4}: four chains from node 0.
  const auto g = Bare(5, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}});
  EXPECT_EQ(MineChains(g).size(), 4u);
  EXPECT_EQ(MineChains(g, {2, 0}).size(), 2u);
  EXPECT_EQ(MineChains(g, {0, 3}).size(), 3u);
  EXPECT_THROW(MineChains(g, {-1, 0}), Error);
}

TEST(HardNegativeTest, ToyGraphPicksSorbitolBranch) {
  const KnowledgeGraph g = ShatteredToy();
  ReasoningChain base;
  for (const auto& c : MineChains(g)) {
    if (c.chain_id == ChainId("T0", "T3", "T4")) base = c;
  }
  ASSERT_FALSE(base.chain_id.empty());
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const ReasoningChain done = SampleHardNegative(base, g, seed);
    EXPECT_EQ(g.FindEntity(done.e_sib)->canonical_name, "Sorbitol Accumulation");
    EXPECT_EQ(g.FindEntity(done.b_prime)->canonical_name, "Schwann Cell Damage");
    EXPECT_TRUE(CheckChainTopology(done, g).empty());
  }
}

TEST(HardNegativeTest, UnshatteredToyAlsoOffersBloodBranch) {
  const KnowledgeGraph g = testing::ToyDiabetesGraph();
  ReasoningChain base;
  for (const auto& c : MineChains(g)) {
    if (c.chain_id == ChainId("T0", "T3", "T4")) base = c;
  }
  std::set<std::string> siblings;
  for (uint64_t seed = 0; seed < 64; ++seed) siblings.insert(SampleHardNegative(base, g, seed).e_sib);
  EXPECT_EQ(siblings, (std::set<std::string>{"T1", "T6"}));
}

TEST(HardNegativeTest, OutDegreeOneHasNoSibling) {
  const auto g = Bare(3, {{0, 1}, {1, 2}});
  const auto chains = MineChains(g);
  ASSERT_EQ(chains.size(), 1u);
  try {
    SampleHardNegative(chains[0], g, 7);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoHardNegative);
  }
}

TEST(HardNegativeTest, SiblingWhoseOnlyTargetIsOnTheChainIsRejected) {
  // 0 -> 1 -> 2 and 0 -> 3 -> 2: the sibling 3 only reaches B.
  const auto g = Bare(4, {{0, 1}, {1, 2}, {0, 3}, {3, 2}});
  for (const auto& c : MineChains(g)) {
    EXPECT_THROW(SampleHardNegative(c, g, 1), Error) << c.chain_id;
  }
}

TEST(HardNegativeTest, SeededAndTopologicallyValid) {
  const World w = ClusteredWorld(3, 4, 10, 25);
  size_t completed = 0;
  for (const auto& c : MineChains(w.graph)) {
    try {
      const auto x = SampleHardNegative(c, w.graph, 11);
      const auto y = SampleHardNegative(c, w.graph, 11);
      EXPECT_EQ(x.e_sib, y.e_sib);
      EXPECT_EQ(x.b_prime, y.b_prime);
      EXPECT_TRUE(CheckChainTopology(x, w.graph).empty()) << c.chain_id;
      ++completed;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kNoHardNegative);
    }
  }
  EXPECT_GT(completed, 20u);
}

TEST(HardNegativeTest, SelectionIsUniformOverSiblings) {
  // A -> bridge -> B plus three siblings each with one private target.
  const auto g = Bare(9, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}, {0, 7}, {7, 8}});
  ReasoningChain base = MineChains(g, {0, 0}).front();
  ASSERT_EQ(base.chain_id, ChainId(Id(0), Id(1), Id(2)));
  std::map<std::string, int> hits;
  for (uint64_t seed = 0; seed < 3000; ++seed) ++hits[SampleHardNegative(base, g, seed).e_sib];
  ASSERT_EQ(hits.size(), 3u);
  for (const auto& [_, n] : hits) EXPECT_NEAR(n, 1000, 100);
}

TEST(MaskingTest, CaseInsensitiveContainment) {
  EXPECT_EQ(VerifyMasking("Biopsy shows AGEs accumulation in bone.", {"AGEs Accumulation"}),
            std::vector<std::string>{"AGEs Accumulation"});
}

TEST(MaskingTest, ParaphrasePasses) {
  EXPECT_TRUE(VerifyMasking("Glycated proteins build up in the matrix over years.",
                            {"AGEs Accumulation"})
                  .empty());
}

TEST(MaskingTest, AliasIsAViolation) {
  const auto v = VerifyMasking("Labs show advanced   glycation end-products.",
                               {"AGEs Accumulation", "advanced glycation end-products"});
  EXPECT_EQ(v, std::vector<std::string>{"advanced glycation end-products"});
}

TEST(MaskingTest, OnlyTheQuestionIsChecked) {
  QAItem item;
  item.question = "Which consequence follows?";
  item.rationale = "Because of AGEs accumulation.";
  item.options = {"AGEs accumulation", "x", "y"};
  item.masked_entity = {"T3", "AGEs accumulation", {}};
  EXPECT_TRUE(VerifyMasking(item).empty());
}

class SynthesisFixture : public ::testing::Test {
 protected:
  ReasoningChain AgesChain() {
    for (const auto& c : MineChains(world.graph)) {
      if (world.graph.FindEntity(c.a)->canonical_name == "Type 2 Diabetes" &&
          world.graph.FindEntity(c.e_bridge)->canonical_name == "AGEs accumulation" &&
          world.graph.FindEntity(c.b)->canonical_name == "Osteoblast suppression") {
        return SampleHardNegative(c, world.graph, 5);
      }
    }
    ADD_FAILURE() << "chain not mined";
    return {};
  }

  World world = ShatteredToyWorld();
};

TEST_F(SynthesisFixture, MockItemMasksBridgeAndCarriesKeyAndHardNegative) {
  ChatClient chat(MockChat(), nullptr);
  SynthesisOptions options;
  const QAItem item = SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, 42);
  EXPECT_EQ(NormalizeForMatch(item.question).find(NormalizeForMatch("AGEs Accumulation")),
            std::string::npos);
  ASSERT_EQ(item.options.size(), 4u);
  EXPECT_EQ(item.options[item.answer_index], "Osteoblast suppression");
  EXPECT_EQ(item.options[item.hard_negative_index], "Schwann Cell Damage");
  EXPECT_EQ(std::set<std::string>(item.options.begin(), item.options.end()),
            (std::set<std::string>{"Osteoblast suppression", "Schwann Cell Damage",
                                   "Impaired Bone Quality", "Fracture risk"}));
  EXPECT_TRUE(CheckOptionIntegrity(item).empty());
  EXPECT_EQ(item.masked_entity.canonical, "AGEs accumulation");
  ASSERT_EQ(item.evidence_anchors.size(), 2u);
  for (const auto& a : item.evidence_anchors) EXPECT_TRUE(AnchorText(a, world.corpus));
  EXPECT_EQ(item.language, "EN");
  EXPECT_EQ(item.difficulty, "easy");
  EXPECT_EQ(item.generation_metadata.seed, 42u);
  EXPECT_EQ(item.generation_metadata.attempts, 1);
  EXPECT_FALSE(item.rationale.empty());
}

TEST_F(SynthesisFixture, TwoOptionsRejected) {
  ChatClient chat(MockChat(), nullptr);
  SynthesisOptions options;
  options.n_options = 2;
  try {
    SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST_F(SynthesisFixture, SameSeedSameOptions) {
  ChatClient chat(MockChat(), nullptr);
  SynthesisOptions options;
  options.n_options = 3;
  std::set<std::vector<std::string>> orders;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const QAItem a = SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, seed);
    const QAItem b = SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, seed);
    EXPECT_EQ(a.options, b.options);
    EXPECT_EQ(a.answer_index, b.answer_index);
    EXPECT_EQ(nlohmann::json(a), nlohmann::json(b));
    orders.insert(a.options);
  }
  EXPECT_GT(orders.size(), 3u);  // fillers and order vary with the seed
}

TEST_F(SynthesisFixture, TooFewFillersDiscards) {
  ChatClient chat(MockChat(), nullptr);
  SynthesisOptions options;
  options.n_options = 5;  // only two distant entities exist
  try {
    SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kItemDiscarded);
    EXPECT_NE(std::string(e.what()).find("filler"), std::string::npos);
  }
}

TEST_F(SynthesisFixture, PersistentLeakDiscardsAfterRetries) {
  auto counting = std::make_shared<CountingChat>(MockChat(1.0));
  ChatClient chat(counting, nullptr);
  SynthesisOptions options;
  try {
    SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kItemDiscarded);
    EXPECT_NE(std::string(e.what()).find("AGEs accumulation"), std::string::npos);
  }
  EXPECT_EQ(counting->calls.load(), 3);
}

TEST_F(SynthesisFixture, RetryRecoversFromOccasionalLeak) {
  ChatClient chat(MockChat(0.5), nullptr);
  SynthesisOptions options;
  int retried = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    try {
      const QAItem item = SynthesizeItem(AgesChain(), world.graph, world.corpus, chat, options, seed);
      EXPECT_TRUE(VerifyMasking(item).empty());
      retried += item.generation_metadata.attempts > 1;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kItemDiscarded);
    }
  }
  EXPECT_GT(retried, 0);
}

TEST(SynthesisTest, DatasetLogsEveryDiscard) {
  const World w = ClusteredWorld(9, 5, 10, 22);
  ChatClient chat(MockChat(0.4), nullptr);
  SynthesisOptions options;
  options.master_seed = 77;
  const auto chains = MineChains(w.graph);
  const SynthesisOutcome out = SynthesizeDataset(chains, w.graph, w.corpus, chat, options);
  EXPECT_EQ(out.items.size() + out.discards.size(), chains.size());
  EXPECT_EQ(out.items.size(), out.chains.size());
  EXPECT_GT(out.items.size(), 50u);
  for (const auto& d : out.discards) EXPECT_FALSE(d.reason.empty());
  std::set<std::string> ids;
  for (size_t i = 0; i < out.items.size(); ++i) {
    EXPECT_TRUE(VerifyMasking(out.items[i]).empty());
    EXPECT_TRUE(CheckOptionIntegrity(out.items[i]).empty());
    EXPECT_TRUE(CheckChainTopology(out.chains[i], w.graph).empty());
    EXPECT_TRUE(ids.insert(out.items[i].qa_id).second);
    QAItem back = nlohmann::json(out.items[i]).get<QAItem>();
    EXPECT_EQ(nlohmann::json(back), nlohmann::json(out.items[i]));
  }
  const SynthesisOutcome again = SynthesizeDataset(chains, w.graph, w.corpus, chat, options);
  EXPECT_EQ(nlohmann::json(again.items), nlohmann::json(out.items));
}

TEST(OverlapTest, IdentityAndDisjoint) {
  EXPECT_DOUBLE_EQ(Rouge1("a b c", "a b c", TokenMode::kWord), 1.0);
  EXPECT_DOUBLE_EQ(Bleu1("a b c", "a b c", TokenMode::kWord), 1.0);
  EXPECT_DOUBLE_EQ(Rouge1("a b c", "x y z", TokenMode::kWord), 0.0);
  EXPECT_DOUBLE_EQ(Bleu1("a b c", "x y z", TokenMode::kWord), 0.0);
  EXPECT_DOUBLE_EQ(Rouge1("", "a", TokenMode::kWord), 0.0);
}

TEST(OverlapTest, HandComputedValues) {
  EXPECT_NEAR(Rouge1("a b c", "a b d", TokenMode::kWord), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(Bleu1("a b c", "a b d", TokenMode::kWord), 2.0 / 3.0, 1e-12);
  // Short candidate: precision 1, penalty exp(1 - 4/2).
  EXPECT_NEAR(Bleu1("a b", "a b c d", TokenMode::kWord), std::exp(-1.0), 1e-12);
  // Repeated candidate tokens are clipped by the reference count.
  EXPECT_NEAR(Bleu1("a a a a", "a b c d", TokenMode::kWord), 0.25, 1e-12);
  EXPECT_NEAR(Rouge1("a a a a", "a b c d", TokenMode::kWord), 0.25, 1e-12);
  // Character unigrams for Chinese.
  EXPECT_NEAR(Rouge1("糖尿病", "糖尿", TokenMode::kCharacter), 0.8, 1e-12);
}

TEST(StatsTest, BoundsCountsAndExclusion) {
  const World w = ClusteredWorld(4, 4, 10, 22);
  ChatClient chat(MockChat(), nullptr);
  SynthesisOptions options;
  options.master_seed = 5;
  auto out = SynthesizeDataset(MineChains(w.graph), w.graph, w.corpus, chat, options);
  ASSERT_GT(out.items.size(), 10u);
  out.items[0].evidence_anchors[0].evidence.sentence_end = 100000;
  out.items[1].difficulty = "hard";
  MockEmbeddingProvider embed(3);
  const DatasetStats stats = ComputeOverlapStats(out.items, w.corpus, embed);
  EXPECT_EQ(stats.total, static_cast<long>(out.items.size()));
  EXPECT_EQ(stats.excluded, 1);
  long split_total = 0, task_total = 0;
  for (const auto& [_, s] : stats.splits) split_total += s.count;
  for (const auto& [_, n] : stats.task_counts) task_total += n;
  EXPECT_EQ(split_total, stats.total);
  EXPECT_EQ(task_total, stats.total);
  EXPECT_EQ(stats.splits.at("EN/hard").count, 1);
  for (const SplitStats* s : {&stats.overall, &stats.splits.at("EN/easy")}) {
    for (double v : {s->distractor_similarity, s->rouge1_content_a, s->rouge1_content_b,
                     s->bleu1_evidence}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_GT(s->avg_question_length, 10.0);
  }
  const auto report = StatsReportJson(stats);
  EXPECT_EQ(report["overall"]["total_qa_pairs"], stats.total);
  EXPECT_TRUE(report["overall"]["ensemble_clarity"].is_null());
}

ChatClient* Scripted(std::vector<std::unique_ptr<ChatClient>>& store, const std::string& id,
                     std::vector<std::string> replies) {
  auto queue = std::make_shared<std::vector<std::string>>(std::move(replies));
  auto next = std::make_shared<size_t>(0);
  auto provider = std::make_shared<FunctionChatProvider>(id, [queue, next](const ChatRequest&) {
    const std::string r = (*queue)[std::min(*next, queue->size() - 1)];
    ++*next;
    return r;
  });
  store.push_back(std::make_unique<ChatClient>(provider, nullptr));
  return store.back().get();
}

std::string Verdict(const std::string& task, int clarity, int validity = 5, int difficulty = 3) {
  return nlohmann::json{{"clinical_task", task},
                        {"reasoning_type", "Multi-hop"},
                        {"clarity_score", clarity},
                        {"validity_score", validity},
                        {"difficulty_score", difficulty}}
      .dump();
}

QAItem SampleItem() {
  QAItem item;
  item.qa_id = "Q1";
  item.question = "A patient presents. What follows?";
  item.options = {"x", "y", "z", "w"};
  item.answer_index = 2;
  item.hard_negative_index = 0;
  item.rationale = "Because.";
  return item;
}

TEST(AdjudicationTest, MeanOfThreeMembers) {
  std::vector<std::unique_ptr<ChatClient>> store;
  std::vector<ChatClient*> ensemble = {
      Scripted(store, "m1", {Verdict("Basic Medicine", 5)}),
      Scripted(store, "m2", {Verdict("Basic Medicine", 4)}),
      Scripted(store, "m3", {Verdict("Clinical Diagnosis", 5)})};
  const QualityVerdict v = AdjudicateQuality(SampleItem(), ensemble);
  EXPECT_NEAR(v.clarity, 14.0 / 3.0, 1e-12);
  EXPECT_EQ(std::round(v.clarity * 100) / 100, 4.67);
  EXPECT_EQ(v.clinical_task, "Basic Medicine");
  EXPECT_EQ(v.members.size(), 3u);
}

TEST(AdjudicationTest, ProseAroundJsonIsAccepted) {
  const auto v = ParseMemberVerdict("Sure, here it is:\n```json\n" +
                                    Verdict("pharmacy/drug safety", 4) + "\n```\nThanks.");
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->clinical_task, "Pharmacy/Drug Safety");
  EXPECT_FALSE(ParseMemberVerdict("no json here").has_value());
  EXPECT_FALSE(ParseMemberVerdict(Verdict("Astrology", 4)).has_value());
  EXPECT_FALSE(ParseMemberVerdict(Verdict("Basic Medicine", 9)).has_value());
}

TEST(AdjudicationTest, TieGoesToFirstMember) {
  std::vector<std::unique_ptr<ChatClient>> store;
  std::vector<ChatClient*> ensemble = {
      Scripted(store, "m1", {Verdict("Clinical Treatment", 5)}),
      Scripted(store, "m2", {Verdict("Basic Medicine", 5)})};
  EXPECT_EQ(AdjudicateQuality(SampleItem(), ensemble).clinical_task, "Clinical Treatment");
}

TEST(AdjudicationTest, OneReaskThenFailure) {
  std::vector<std::unique_ptr<ChatClient>> store;
  std::vector<ChatClient*> recovers = {
      Scripted(store, "m1", {"I think it is fine.", Verdict("Basic Medicine", 3)})};
  EXPECT_EQ(AdjudicateQuality(SampleItem(), recovers).clarity, 3.0);

  std::vector<ChatClient*> broken = {Scripted(store, "m2", {"nope", "still nope", Verdict("Basic Medicine", 3)})};
  try {
    AdjudicateQuality(SampleItem(), broken);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAdjudication);
  }
}

TEST(AdjudicationTest, PartialFailureAveragesSurvivors) {
  std::vector<std::unique_ptr<ChatClient>> store;
  std::vector<ChatClient*> ensemble = {Scripted(store, "bad", {"x"}),
                                       Scripted(store, "m1", {Verdict("Basic Medicine", 4, 4)}),
                                       Scripted(store, "m2", {Verdict("Basic Medicine", 5, 5)})};
  const QualityVerdict v = AdjudicateQuality(SampleItem(), ensemble);
  EXPECT_DOUBLE_EQ(v.validity, 4.5);
  EXPECT_EQ(v.failed_members, std::vector<std::string>{"bad"});
}

TEST(AdjudicationTest, PromptIsSentVerbatim) {
  std::ifstream in(KGBENCH_SOURCE_DIR "/assets/quality_prompt.txt");
  std::stringstream file;
  file << in.rdbuf();
  const ChatRequest r = AdjudicationRequest(SampleItem(), "judge");
  ASSERT_EQ(r.messages.size(), 2u);
  EXPECT_EQ(r.messages[0].text, file.str());
  EXPECT_NE(r.messages[1].text.find("C. z"), std::string::npos);
}

TEST(AdjudicationTest, DatasetFlagsUnscoredItems) {
  std::vector<std::unique_ptr<ChatClient>> store;
  auto provider = std::make_shared<FunctionChatProvider>("picky", [](const ChatRequest& r) {
    return r.messages[1].text.find("skip me") != std::string::npos ? std::string("??")
                                                                     : Verdict("Basic Medicine", 4);
  });
  store.push_back(std::make_unique<ChatClient>(provider, nullptr));
  std::vector<QAItem> items = {SampleItem(), SampleItem()};
  items[1].qa_id = "Q2";
  items[1].question = "skip me";
  const auto summary = AdjudicateDataset(items, {store.back().get()});
  EXPECT_EQ(summary.scored, 1);
  EXPECT_EQ(summary.unscored_qa_ids, std::vector<std::string>{"Q2"});
  EXPECT_EQ(items[0].clinical_task, "Basic Medicine");
  EXPECT_EQ(items[1].clinical_task, kUnscoredTask);
  EXPECT_FALSE(items[1].quality.has_value());
}

TEST(AdjudicationTest, MockEnsembleScoresEverything) {
  std::vector<std::unique_ptr<ChatClient>> store;
  std::vector<ChatClient*> ensemble;
  for (const char* name : {"judge-a", "judge-b", "judge-c"}) {
    store.push_back(std::make_unique<ChatClient>(MockChat(0.0, name), nullptr));
    ensemble.push_back(store.back().get());
  }
  std::vector<QAItem> items(5, SampleItem());
  for (size_t i = 0; i < items.size(); ++i) items[i].question += std::to_string(i);
  EXPECT_EQ(AdjudicateDataset(items, ensemble).scored, 5);
  for (const auto& item : items) {
    ASSERT_TRUE(item.quality);
    EXPECT_GE(item.quality->clarity, 1.0);
    EXPECT_LE(item.quality->clarity, 5.0);
  }
}

}  // namespace
}  // namespace kgbench
