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


#ifndef KGBENCH_PIPELINE_PIPELINE_H_
#define KGBENCH_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgbench/corpus/corpus.h"
#include "kgbench/eval/harness.h"
#include "kgbench/pipeline/config.h"
#include "kgbench/pipeline/manifest.h"
#include "kgbench/providers/cache.h"
#include "kgbench/providers/chat.h"
#include "kgbench/providers/embedding.h"

namespace kgbench {

// Commands in pipeline order.
const std::vector<std::string>& PipelineCommands();

// Artifact file names shared by the stages and the CLI.
namespace artifacts {
inline constexpr char kConfig[] = "config";
inline constexpr char kManifest[] = "manifest.json";
inline constexpr char kDocuments[] = "documents.jsonl";
inline constexpr char kSentences[] = "sentences.jsonl";
inline constexpr char kChunks[] = "chunks.jsonl";
inline constexpr char kTree[] = "tree.jsonl";
inline constexpr char kGmmReport[] = "gmm_report.json";
inline constexpr char kTriplets[] = "triplets.jsonl";
inline constexpr char kRejectedTriplets[] = "rejected_triplets.jsonl";
inline constexpr char kGraph[] = "graph.jsonl";
inline constexpr char kGraphBuildReport[] = "graph_build_report.json";
inline constexpr char kShatteredGraph[] = "graph_shattered.jsonl";
inline constexpr char kTopologyReport[] = "topology_report.json";
inline constexpr char kTopologySweep[] = "topology_sweep.json";
inline constexpr char kChains[] = "chains.jsonl";
inline constexpr char kSynthesized[] = "synthesized.jsonl";
inline constexpr char kCompletedChains[] = "completed_chains.jsonl";
inline constexpr char kDiscards[] = "discards.jsonl";
inline constexpr char kDataset[] = "dataset.jsonl";
inline constexpr char kStatsReport[] = "stats_report.json";
inline constexpr char kReportTable[] = "report_table.md";
}  // namespace artifacts

// JSONL schema names; every stage artifact is at version 1.
namespace schemas {
inline constexpr int kVersion = 1;
inline constexpr char kDocuments[] = "kgbench.documents";
inline constexpr char kSentences[] = "kgbench.sentences";
inline constexpr char kChunks[] = "kgbench.chunks";
inline constexpr char kTree[] = "kgbench.tree";
inline constexpr char kTriplets[] = "kgbench.triplets";
inline constexpr char kRejectedTriplets[] = "kgbench.rejected_triplets";
inline constexpr char kChains[] = "kgbench.chains";
inline constexpr char kDiscards[] = "kgbench.discards";
inline constexpr char kContexts[] = "kgbench.contexts";
}  // namespace schemas

// Loads documents, sentences and (when present) chunks from a run directory.
CorpusStore LoadRunCorpus(const std::filesystem::path& run_dir, bool with_chunks);

// Model ids reduced to [A-Za-z0-9._-] for file names.
std::string FileSafe(const std::string& model_id);
std::string OutcomesFileName(const std::string& model_id, EvalMode mode);
std::string ReportFileName(const std::string& model_id);
std::string ContextsFileName(const std::string& model_id);

// Arguments for evaluate and report; unset fields fall back to the config.
struct CommandArgs {
  std::optional<std::string> model;
  EvalMode mode = EvalMode::kZeroShot;
  std::optional<int> context_k;
  std::optional<int> coarse_pool;
  std::optional<int> rerank_keep;
  std::optional<uint64_t> seed;
};

// Builds chat providers by role ("generator", "judge", "eval") and model.
using ChatFactory =
    std::function<std::shared_ptr<ChatProvider>(const std::string& role, const std::string& model)>;

struct PipelineOptions {
  bool force = false;
  // Overrides the providers named in the config (tests, custom backends).
  ChatFactory chat_factory;
  std::shared_ptr<EmbeddingProvider> embedder;
  std::function<void(const std::string&)> log;
};

struct StageResult {
  std::string key;
  bool skipped = false;  // unchanged inputs, params and outputs
  std::vector<std::string> outputs;
};

class Pipeline {
 public:
  // Creates the run directory when needed. Fails with kStaleRun when an
  // existing manifest carries another config digest, unless options.force.
  Pipeline(PipelineConfig config, std::filesystem::path run_dir, PipelineOptions options = {});

  // Runs one command under the run lock.
  StageResult Run(const std::string& command, const CommandArgs& args = {});

  // Every stage in order, then evaluate (both modes) and report for each
  // configured model.
  std::vector<StageResult> RunAll();

  const RunManifest& manifest() const { return manifest_; }
  const PipelineConfig& config() const { return config_; }
  const std::filesystem::path& run_dir() const { return run_dir_; }

 private:
  struct StagePlan;

  StageResult Execute(const StagePlan& plan);
  StagePlan Plan(const std::string& command, const CommandArgs& args);

  std::shared_ptr<ChatProvider> MakeChat(const std::string& role, const std::string& model) const;
  EmbeddingProvider& Embedder();
  std::shared_ptr<ResponseCache> Cache();

  void Log(const std::string& message) const;

  PipelineConfig config_;
  std::filesystem::path run_dir_;
  PipelineOptions options_;
  std::string config_digest_;
  RunManifest manifest_;
  std::shared_ptr<EmbeddingProvider> embedder_;
  std::shared_ptr<ResponseCache> cache_;
};

}  // namespace kgbench

#endif  // KGBENCH_PIPELINE_PIPELINE_H_
