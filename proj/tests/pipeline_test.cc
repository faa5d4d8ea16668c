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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "kgbench/pipeline/config.h"
#include "kgbench/pipeline/manifest.h"
#include "kgbench/pipeline/pipeline.h"
#include "kgbench/synthesis/items.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/files.h"
#include "kgbench/util/jsonl.h"
#include "test_support.h"

namespace kgbench {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

const fs::path kToyDir = fs::path(KGBENCH_SOURCE_DIR) / "data" / "toy";

PipelineConfig ToyConfig() { return LoadPipelineConfig(kToyDir / "pipeline.ini"); }

std::string MinimalIni(const std::string& extra) {
  return "[corpus]\npaths = docs\n[providers]\nmock_triplets = t.tsv\n" + extra;
}

template <typename Fn>
ErrorKind KindOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kStage;
}

TEST(ConfigTest, DefaultsMatchDocumentedValues) {
  const PipelineConfig c = ParsePipelineConfig(MinimalIni(""), "/base");
  EXPECT_DOUBLE_EQ(c.chunk_percentile, 95.0);
  EXPECT_EQ(c.k_threshold, KThreshold(50));
  EXPECT_EQ(c.k_max, 50);
  EXPECT_EQ(c.retrieval.coarse_pool_size, 50);
  EXPECT_EQ(c.retrieval.rerank_keep, 15);
  EXPECT_EQ(c.retrieval.context_size, 5);
  EXPECT_EQ(c.n_options, 4);
  EXPECT_EQ(FormatThetaSchedule(c.theta), "3:0,7:1,12:2,inf:3");
  EXPECT_EQ(c.Resolve("docs"), fs::path("/base/docs"));
  EXPECT_EQ(c.Resolve("/abs/x"), fs::path("/abs/x"));
}

TEST(ConfigTest, ParsesEverySection) {
  const PipelineConfig c = ParsePipelineConfig(MinimalIni(R"(
[run]
seed = 18446744073709551615
language = ZH
[chunk]
percentile = 90
global_threshold = true
[tree]
bic_penalty = cluster_count
[kg]
k_threshold = inf
theta = 2:0,inf:1
counting_unit = mentions
sweep_k = 5, inf
[synthesis]
difficulty = hard
[eval]
context_k = 3
coarse_pool = 20
rerank_keep = 10
models = a, b ,c
)"),
                                               "/b");
  EXPECT_EQ(c.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.language, Language::kZh);
  EXPECT_TRUE(c.chunk_global_threshold);
  EXPECT_EQ(c.bic_penalty, BicPenalty::kClusterCount);
  EXPECT_EQ(c.k_threshold, std::nullopt);
  EXPECT_EQ(c.counting_unit, CountingUnit::kMentions);
  ASSERT_EQ(c.sweep_k.size(), 2u);
  EXPECT_EQ(c.sweep_k[0], KThreshold(5));
  EXPECT_EQ(c.difficulty, "hard");
  EXPECT_EQ(c.models, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(ConfigTest, RejectsUnknownKeysAndOutOfRangeValues) {
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[chunk]\npercentil = 95\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[extra]\na = 1\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[chunk]\npercentile = 0\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[chunk]\npercentile = 101\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[kg]\nk_threshold = 0\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[tree]\nk_max = 12x\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("[synthesis]\nn_options = 2\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] {
              ParsePipelineConfig(MinimalIni("[eval]\ncontext_k = 9\nrerank_keep = 5\n"), ".");
            }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig(MinimalIni("chat = grpc\n"), "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig("[run]\nseed = 1\n", "."); }),
            ErrorKind::kValidation);
  EXPECT_EQ(KindOf([] { ParsePipelineConfig("[run\nseed = 1\n", "."); }), ErrorKind::kParse);
}

TEST(ConfigTest, DigestTracksSettingsNotBaseDirectory) {
  const PipelineConfig a = ParsePipelineConfig(MinimalIni(""), "/x");
  const PipelineConfig b = ParsePipelineConfig(MinimalIni(""), "/y");
  const PipelineConfig c = ParsePipelineConfig(MinimalIni("[run]\nseed = 9\n"), "/x");
  EXPECT_EQ(ConfigDigest(a), ConfigDigest(b));
  EXPECT_NE(ConfigDigest(a), ConfigDigest(c));
  EXPECT_EQ(ConfigDigest(a).size(), 64u);
}

TEST(SeedTest, StageSeedIsDigestOfMasterStageAndItem) {
  // Leading 8 bytes, big-endian, of SHA-256("<master>|<stage>|<item>").
  EXPECT_EQ(DeriveSeed(7, "tree", ""), 1936028853912485219ULL);
  EXPECT_EQ(DeriveSeed(20240601, "rag-context", "Q1"), 6304608208438129187ULL);
}

QAItem SampleItem(int i) {
  QAItem item;
  item.qa_id = "Q" + std::to_string(i);
  item.language = "EN";
  item.difficulty = "easy";
  item.question = "Stem " + std::to_string(i) + " with \"quotes\" and 中文";
  item.options = {"w", "x", "y", "z"};
  item.answer_index = i % 4;
  item.hard_negative_index = (i + 1) % 4;
  item.masked_entity = {"E1", "Bridge", {"alias"}};
  item.rationale = "because";
  item.evidence_anchors = {{"hop1", "doc", {"doc#c0", i, i, 1}}};
  item.chain_ref = "A>B>C";
  item.generation_metadata = {"m", 0.7, 42u + i, 1};
  if (i == 2) item.quality = QualityVerdict{"Basic Medicine", "Multi-hop", 4, 3.5, 2, {"j"}, {}};
  return item;
}

TEST(SnapshotTest, DatasetRoundTripsStructurally) {
  TempDir dir;
  std::vector<QAItem> items = {SampleItem(0), SampleItem(1), SampleItem(2)};
  const auto path = dir.path() / "d.jsonl";
  Snapshot(items, path, JsonlHeader{kDatasetSchema, kDatasetSchemaVersion, {}});
  const auto loaded = Load<QAItem>(path, kDatasetSchema, kDatasetSchemaVersion);
  ASSERT_EQ(loaded.size(), 3u);
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(nlohmann::json(loaded[i]), nlohmann::json(items[i]));
}

TEST(SnapshotTest, TruncatedFinalLineIsParseErrorAtThatLine) {
  TempDir dir;
  const auto path = dir.path() / "d.jsonl";
  Snapshot(std::vector<QAItem>{SampleItem(0), SampleItem(1)}, path,
           JsonlHeader{kDatasetSchema, kDatasetSchemaVersion, {}});
  std::string content = ReadFile(path);
  content.resize(content.size() - 20);
  WriteFileAtomic(path, content);
  try {
    Load<QAItem>(path, kDatasetSchema, kDatasetSchemaVersion);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("d.jsonl:3:"), std::string::npos) << e.what();
  }
}

TEST(SnapshotTest, EmptyListIsHeaderOnly) {
  TempDir dir;
  const auto path = dir.path() / "d.jsonl";
  Snapshot(std::vector<QAItem>{}, path, JsonlHeader{kDatasetSchema, kDatasetSchemaVersion, {}});
  const std::string content = ReadFile(path);
  EXPECT_EQ(std::count(content.begin(), content.end(), '\n'), 1);
  EXPECT_TRUE(Load<QAItem>(path, kDatasetSchema, kDatasetSchemaVersion).empty());
}

TEST(SnapshotTest, VersionMismatchIsMigrationError) {
  TempDir dir;
  const auto path = dir.path() / "d.jsonl";
  Snapshot(std::vector<QAItem>{}, path, JsonlHeader{kDatasetSchema, 99, {}});
  EXPECT_EQ(KindOf([&] { Load<QAItem>(path, kDatasetSchema, kDatasetSchemaVersion); }),
            ErrorKind::kMigration);
}

TEST(PipelineTest, MineBeforeShatterNamesShatter) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  pipeline.Run("ingest");
  try {
    pipeline.Run("mine");
    FAIL() << "expected a dependency error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDependency);
    EXPECT_EQ(ExitCodeFor(e.kind()), 3);
    EXPECT_NE(std::string(e.what()).find("`shatter`"), std::string::npos) << e.what();
  }
  EXPECT_FALSE(fs::exists(dir.path() / "run.lock"));
}

TEST(PipelineTest, RerunningUnchangedChunkIsNoOp) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  pipeline.Run("ingest");
  EXPECT_FALSE(pipeline.Run("chunk").skipped);
  const std::string digest = FileSha256Hex(dir.path() / "chunks.jsonl");
  const auto mtime = fs::last_write_time(dir.path() / "chunks.jsonl");
  const StageRecord before = *pipeline.manifest().Find("chunk");

  Pipeline again(ToyConfig(), dir.path());
  EXPECT_TRUE(again.Run("chunk").skipped);
  EXPECT_EQ(FileSha256Hex(dir.path() / "chunks.jsonl"), digest);
  EXPECT_EQ(fs::last_write_time(dir.path() / "chunks.jsonl"), mtime);
  EXPECT_EQ(again.manifest().Find("chunk")->finished_at, before.finished_at);
}

TEST(PipelineTest, DeletedOutputIsRebuilt) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  pipeline.Run("ingest");
  pipeline.Run("chunk");
  const std::string digest = FileSha256Hex(dir.path() / "chunks.jsonl");
  fs::remove(dir.path() / "chunks.jsonl");
  EXPECT_FALSE(pipeline.Run("chunk").skipped);
  EXPECT_EQ(FileSha256Hex(dir.path() / "chunks.jsonl"), digest);
}

TEST(PipelineTest, ChangedConfigIsStaleUnlessForced) {
  TempDir dir;
  {
    Pipeline pipeline(ToyConfig(), dir.path());
    pipeline.Run("ingest");
  }
  PipelineConfig changed = ToyConfig();
  changed.chunk_percentile = 80;
  EXPECT_EQ(KindOf([&] { Pipeline p(changed, dir.path()); }), ErrorKind::kStaleRun);
  PipelineOptions force;
  force.force = true;
  Pipeline forced(changed, dir.path(), force);
  forced.Run("chunk");
  EXPECT_EQ(ReadManifest(dir.path() / "manifest.json").config_digest, ConfigDigest(changed));
}

TEST(PipelineTest, ModifiedUpstreamArtifactIsStale) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  pipeline.Run("ingest");
  std::ofstream(dir.path() / "sentences.jsonl", std::ios::app) << "\n";
  EXPECT_EQ(KindOf([&] { pipeline.Run("chunk"); }), ErrorKind::kStaleRun);
  EXPECT_FALSE(VerifyManifest(pipeline.manifest(), dir.path()).empty());
}

TEST(PipelineTest, HeldLockBlocksCommands) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  {
    RunLock lock(dir.path());
    EXPECT_EQ(KindOf([&] { pipeline.Run("ingest"); }), ErrorKind::kValidation);
  }
  EXPECT_NO_THROW(pipeline.Run("ingest"));
}

TEST(PipelineTest, EvaluateNeedsModelWhenSeveralAreConfigured) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  EXPECT_EQ(KindOf([&] { pipeline.Run("evaluate"); }), ErrorKind::kValidation);
  EXPECT_EQ(KindOf([&] { pipeline.Run("bogus"); }), ErrorKind::kValidation);
}

TEST(PipelineTest, ToyRunProducesDatasetAndCompleteManifest) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  pipeline.RunAll();

  const auto items = Load<QAItem>(dir.path() / "dataset.jsonl", kDatasetSchema,
                                  kDatasetSchemaVersion);
  EXPECT_GE(items.size(), 1u);
  for (const auto& item : items) {
    EXPECT_TRUE(VerifyMasking(item).empty()) << item.qa_id;
    EXPECT_TRUE(item.quality.has_value());
  }
  for (const char* name : {"config", "manifest.json", "chunks.jsonl", "tree.jsonl", "graph.jsonl",
                           "chains.jsonl", "dataset.jsonl", "stats_report.json",
                           "report_mock-a.json", "report_mock-b.json",
                           "outcomes_mock-a_zero_shot.jsonl", "outcomes_mock-b_rag.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir.path() / name)) << name;
  }

  const RunManifest manifest = ReadManifest(dir.path() / "manifest.json");
  EXPECT_EQ(manifest.config_digest, ConfigDigest(ToyConfig()));
  EXPECT_EQ(manifest.tool_version, kToolVersion);
  EXPECT_EQ(manifest.stages.size(), 15u);
  EXPECT_TRUE(VerifyManifest(manifest, dir.path()).empty());
  for (const auto& stage : manifest.stages) {
    EXPECT_FALSE(stage.outputs.empty()) << stage.key;
    EXPECT_FALSE(stage.started_at.empty());
  }
  const auto report = nlohmann::json::parse(ReadFile(dir.path() / "report_mock-a.json"));
  EXPECT_EQ(report["config_digest"], manifest.config_digest);

  // A second full pass is entirely up to date.
  for (const auto& r : pipeline.RunAll()) EXPECT_TRUE(r.skipped) << r.key;
}

TEST(PipelineTest, InterruptedEvaluationResumes) {
  TempDir dir;
  Pipeline pipeline(ToyConfig(), dir.path());
  for (const char* c : {"ingest", "chunk", "tree", "extract", "shatter", "mine", "synthesize",
                        "adjudicate"}) {
    pipeline.Run(c);
  }
  CommandArgs args;
  args.model = "mock-a";
  pipeline.Run("evaluate", args);
  const std::string full = ReadFile(dir.path() / OutcomesFileName("mock-a", EvalMode::kZeroShot));

  // Simulate a crash: the record is gone and the file holds a prefix.
  TempDir other;
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    fs::copy(entry.path(), other.path() / entry.path().filename());
  }
  RunManifest m = ReadManifest(other.path() / "manifest.json");
  m.stages.pop_back();
  WriteManifest(m, other.path() / "manifest.json");
  const auto newline = full.find('\n', full.find('\n') + 1);
  WriteFileAtomic(other.path() / OutcomesFileName("mock-a", EvalMode::kZeroShot),
                  full.substr(0, newline + 1));
  Pipeline resumed(ToyConfig(), other.path());
  resumed.Run("evaluate", args);
  EXPECT_EQ(ReadFile(other.path() / OutcomesFileName("mock-a", EvalMode::kZeroShot)), full);
}

}  // namespace
}  // namespace kgbench
