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


#include "kgbench/pipeline/pipeline.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "kgbench/corpus/chunker.h"
#include "kgbench/eval/metrics.h"
#include "kgbench/eval/rag.h"
#include "kgbench/hierarchy/projection.h"
#include "kgbench/hierarchy/summary_tree.h"
#include "kgbench/kg/extraction.h"
#include "kgbench/kg/graph.h"
#include "kgbench/kg/graph_builder.h"
#include "kgbench/providers/http.h"
#include "kgbench/providers/mock.h"
#include "kgbench/synthesis/adjudication.h"
#include "kgbench/synthesis/chains.h"
#include "kgbench/synthesis/items.h"
#include "kgbench/synthesis/stats.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/files.h"
#include "kgbench/util/jsonl.h"

namespace kgbench {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

JsonlHeader Header(const char* schema, json meta = json::object()) {
  return JsonlHeader{schema, schemas::kVersion, std::move(meta)};
}

// Stage that writes each run-directory artifact.
std::string ProducingCommand(const std::string& artifact) {
  static const std::map<std::string, std::string> producers = {
      {artifacts::kDocuments, "ingest"},       {artifacts::kSentences, "ingest"},
      {artifacts::kChunks, "chunk"},           {artifacts::kTree, "tree"},
      {artifacts::kTriplets, "extract"},       {artifacts::kGraph, "extract"},
      {artifacts::kShatteredGraph, "shatter"}, {artifacts::kChains, "mine"},
      {artifacts::kSynthesized, "synthesize"}, {artifacts::kDataset, "adjudicate"},
  };
  const auto it = producers.find(artifact);
  if (it != producers.end()) return it->second;
  if (artifact.rfind("outcomes_", 0) == 0) return "evaluate";
  return "";
}

std::vector<fs::path> CorpusFiles(const PipelineConfig& config) {
  std::vector<fs::path> files;
  for (const auto& entry : config.corpus_paths) {
    const fs::path path = config.Resolve(entry);
    if (fs::is_directory(path)) {
      std::vector<fs::path> found;
      for (const auto& f : fs::directory_iterator(path)) {
        const auto ext = f.path().extension();
        if (f.is_regular_file() && (ext == ".txt" || ext == ".md")) found.push_back(f.path());
      }
      std::sort(found.begin(), found.end());
      Require(!found.empty(), "[corpus] " + entry + ": directory holds no .txt or .md files");
      files.insert(files.end(), found.begin(), found.end());
    } else {
      Require(fs::is_regular_file(path), "[corpus] " + entry + ": no such file or directory");
      files.push_back(path);
    }
  }
  return files;
}

std::vector<std::string> ModelsFor(const PipelineConfig& config, const CommandArgs& args) {
  if (args.model) return {*args.model};
  return config.models;
}

std::unique_ptr<Reranker> MakeReranker(const EndpointSettings& settings) {
  if (settings.kind == "mock") return std::make_unique<MockReranker>();
  if (settings.kind == "http") {
    return std::make_unique<HttpReranker>(HttpEndpointConfig{
        settings.base_url, settings.model, settings.api_key_env, settings.timeout_seconds});
  }
  return nullptr;
}

}  // namespace

const std::vector<std::string>& PipelineCommands() {
  static const std::vector<std::string> commands = {
      "ingest", "chunk",      "tree",  "extract",  "shatter", "mine",         "synthesize",
      "adjudicate", "stats", "evaluate", "report", "shatter-sweep"};
  return commands;
}

std::string FileSafe(const std::string& model_id) {
  std::string out = model_id;
  for (char& c : out) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '.' && c != '_' && c != '-') c = '_';
  }
  return out;
}

std::string OutcomesFileName(const std::string& model_id, EvalMode mode) {
  return "outcomes_" + FileSafe(model_id) + "_" + EvalModeName(mode) + ".jsonl";
}

std::string ReportFileName(const std::string& model_id) {
  return "report_" + FileSafe(model_id) + ".json";
}

std::string ContextsFileName(const std::string& model_id) {
  return "contexts_" + FileSafe(model_id) + ".jsonl";
}

CorpusStore LoadRunCorpus(const fs::path& run_dir, bool with_chunks) {
  auto documents =
      Load<Document>(run_dir / artifacts::kDocuments, schemas::kDocuments, schemas::kVersion);
  auto sentences =
      Load<Sentence>(run_dir / artifacts::kSentences, schemas::kSentences, schemas::kVersion);
  std::vector<Chunk> chunks;
  if (with_chunks) {
    chunks = Load<Chunk>(run_dir / artifacts::kChunks, schemas::kChunks, schemas::kVersion);
  }
  return CorpusStore(std::move(documents), std::move(sentences), std::move(chunks));
}

struct Pipeline::StagePlan {
  std::string key;
  std::string command;
  json params;
  std::vector<std::string> inputs;   // run-dir names or ExternalName paths
  std::vector<std::string> outputs;  // run-dir names
  std::function<void()> body;
  std::function<void()> before_rerun;  // runs when a previous record is stale
};

Pipeline::Pipeline(PipelineConfig config, fs::path run_dir, PipelineOptions options)
    : config_(std::move(config)),
      run_dir_(std::move(run_dir)),
      options_(std::move(options)),
      config_digest_(ConfigDigest(config_)) {
  fs::create_directories(run_dir_);
  const fs::path manifest_path = run_dir_ / artifacts::kManifest;
  if (fs::exists(manifest_path)) {
    manifest_ = ReadManifest(manifest_path);
    if (manifest_.config_digest != config_digest_ && !options_.force) {
      Fail(ErrorKind::kStaleRun, "config digest " + config_digest_.substr(0, 12) +
                                     " differs from the run manifest (" +
                                     manifest_.config_digest.substr(0, 12) +
                                     "); use --force to continue with the new config");
    }
  } else {
    manifest_.created_at = UtcTimestamp();
    manifest_.run_id =
        Sha256Hex(config_digest_ + "|" + fs::absolute(run_dir_).string() + "|" +
                  manifest_.created_at)
            .substr(0, 16);
  }
  manifest_.config_digest = config_digest_;
}

void Pipeline::Log(const std::string& message) const {
  if (options_.log) options_.log(message);
}

std::shared_ptr<ChatProvider> Pipeline::MakeChat(const std::string& role,
                                                 const std::string& model) const {
  if (options_.chat_factory) return options_.chat_factory(role, model);
  if (config_.chat.kind == "http") {
    HttpEndpointConfig endpoint{config_.chat.base_url, model.empty() ? config_.chat.model : model,
                                config_.chat.api_key_env, config_.chat.timeout_seconds};
    return std::make_shared<HttpChatProvider>(endpoint);
  }
  MockChatOptions mock;
  mock.triplets = LoadTripletFixture(config_.Resolve(config_.mock_triplets_path));
  mock.leak_rate = config_.mock_leak_rate;
  mock.member_name = model.empty() ? role : model;
  return std::make_shared<MockChatProvider>(std::move(mock));
}

EmbeddingProvider& Pipeline::Embedder() {
  if (!embedder_) {
    if (options_.embedder) {
      embedder_ = options_.embedder;
    } else if (config_.embedding.kind == "http") {
      embedder_ = std::make_shared<HttpEmbeddingProvider>(HttpEndpointConfig{
          config_.embedding.base_url, config_.embedding.model, config_.embedding.api_key_env,
          config_.embedding.timeout_seconds});
    } else {
      embedder_ = std::make_shared<MockEmbeddingProvider>(
          DeriveSeed(config_.master_seed, "mock-embedding", ""), config_.embedding_dim);
    }
  }
  return *embedder_;
}

std::shared_ptr<ResponseCache> Pipeline::Cache() {
  if (!cache_ && !config_.cache_dir.empty()) {
    cache_ = std::make_shared<ResponseCache>(config_.Resolve(config_.cache_dir));
  }
  return cache_;
}

StageResult Pipeline::Run(const std::string& command, const CommandArgs& args) {
  RunLock lock(run_dir_);
  const fs::path manifest_path = run_dir_ / artifacts::kManifest;
  if (fs::exists(manifest_path)) {
    RunManifest on_disk = ReadManifest(manifest_path);
    if (on_disk.config_digest != config_digest_ && !options_.force) {
      Fail(ErrorKind::kStaleRun, "config digest differs from the run manifest; use --force");
    }
    on_disk.config_digest = config_digest_;
    manifest_ = std::move(on_disk);
  }
  json config_copy = ConfigJson(config_);
  config_copy["base_dir"] = config_.base_dir.string();
  WriteFileAtomic(run_dir_ / artifacts::kConfig, PrettyJson(config_copy));
  return Execute(Plan(command, args));
}

std::vector<StageResult> Pipeline::RunAll() {
  std::vector<StageResult> results;
  for (const char* command : {"ingest", "chunk", "tree", "extract", "shatter", "shatter-sweep",
                              "mine", "synthesize", "adjudicate", "stats"}) {
    results.push_back(Run(command));
  }
  for (const auto& model : config_.models) {
    for (EvalMode mode : {EvalMode::kZeroShot, EvalMode::kRag}) {
      CommandArgs args;
      args.model = model;
      args.mode = mode;
      results.push_back(Run("evaluate", args));
    }
  }
  results.push_back(Run("report"));
  return results;
}

StageResult Pipeline::Execute(const StagePlan& plan) {
  std::map<std::string, std::string> inputs;
  for (const auto& name : plan.inputs) {
    const bool external = name.rfind("external:", 0) == 0;
    const fs::path path = external ? fs::path(name.substr(9)) : run_dir_ / name;
    if (!fs::exists(path)) {
      if (external) Fail(ErrorKind::kValidation, "input file not found: " + path.string());
      const std::string producer = ProducingCommand(name);
      Fail(ErrorKind::kDependency,
           "`" + plan.command + "` needs " + name + "; run `" + producer + "` first");
    }
    inputs[name] = FileSha256Hex(path);
    if (const StageRecord* producer = manifest_.Producer(name)) {
      if (producer->outputs.at(name) != inputs[name] && !options_.force) {
        Fail(ErrorKind::kStaleRun, name + " changed since `" + producer->command +
                                       "` wrote it; rerun `" + producer->command +
                                       "` or use --force");
      }
    }
  }
  const std::string params_digest = Sha256Hex(plan.params.dump());

  StageResult result{plan.key, false, plan.outputs};
  const StageRecord* previous = manifest_.Find(plan.key);
  if (previous && previous->params_digest == params_digest && previous->inputs == inputs) {
    bool outputs_intact = true;
    for (const auto& name : plan.outputs) {
      const auto it = previous->outputs.find(name);
      outputs_intact = outputs_intact && it != previous->outputs.end() &&
                       fs::exists(run_dir_ / name) &&
                       FileSha256Hex(run_dir_ / name) == it->second;
    }
    if (outputs_intact) {
      Log(plan.key + ": up to date");
      result.skipped = true;
      return result;
    }
  }
  if (previous && plan.before_rerun) plan.before_rerun();

  StageRecord record;
  record.key = plan.key;
  record.command = plan.command;
  record.params_digest = params_digest;
  record.inputs = inputs;
  record.started_at = UtcTimestamp();
  Log(plan.key + ": running");
  plan.body();
  for (const auto& name : plan.outputs) {
    Require(fs::exists(run_dir_ / name), plan.key + " did not write " + name);
    record.outputs[name] = FileSha256Hex(run_dir_ / name);
  }
  record.finished_at = UtcTimestamp();
  manifest_.Upsert(std::move(record));
  WriteManifest(manifest_, run_dir_ / artifacts::kManifest);
  Log(plan.key + ": done");
  return result;
}

Pipeline::StagePlan Pipeline::Plan(const std::string& command, const CommandArgs& args) {
  const json cfg = ConfigJson(config_);
  const fs::path dir = run_dir_;
  StagePlan plan;
  plan.key = command;
  plan.command = command;

  if (command == "ingest") {
    const auto files = CorpusFiles(config_);
    plan.params = {{"corpus", cfg["corpus"]}, {"language", cfg["run"]["language"]}};
    for (const auto& f : files) plan.inputs.push_back(ExternalName(f));
    plan.outputs = {artifacts::kDocuments, artifacts::kSentences};
    plan.body = [this, files, dir] {
      std::vector<Document> documents;
      std::vector<Sentence> sentences;
      std::set<std::string> ids;
      for (const auto& f : files) {
        Document doc = LoadDocument(f, config_.language);
        Require(ids.insert(doc.doc_id).second, "duplicate document id " + doc.doc_id);
        doc.source_path = fs::absolute(f).lexically_relative(config_.base_dir).generic_string();
        for (auto& s : SplitSentences(doc)) sentences.push_back(std::move(s));
        documents.push_back(std::move(doc));
      }
      Snapshot(documents, dir / artifacts::kDocuments, Header(schemas::kDocuments));
      Snapshot(sentences, dir / artifacts::kSentences, Header(schemas::kSentences));
    };
    return plan;
  }

  if (command == "chunk") {
    plan.params = {{"chunk", cfg["chunk"]},
                   {"embedding", cfg["providers"]["embedding"]},
                   {"embedding_dim", config_.embedding_dim},
                   {"seed", config_.master_seed}};
    plan.inputs = {artifacts::kDocuments, artifacts::kSentences};
    plan.outputs = {artifacts::kChunks};
    plan.body = [this, dir] {
      const CorpusStore corpus = LoadRunCorpus(dir, false);
      const ChunkOptions options{config_.chunk_percentile, config_.chunk_max_sentences};
      std::vector<std::vector<Sentence>> per_doc;
      std::vector<std::vector<EmbeddingVector>> vectors;
      std::vector<double> all_distances;
      for (const auto& doc : corpus.documents()) {
        std::vector<Sentence> sentences;
        std::vector<std::string> texts;
        for (const Sentence* s : corpus.DocumentSentences(doc.doc_id)) {
          sentences.push_back(*s);
          texts.push_back(s->text);
        }
        if (sentences.empty()) continue;
        vectors.push_back(EmbedTexts(Embedder(), texts));
        const auto d = ConsecutiveDistances(vectors.back());
        all_distances.insert(all_distances.end(), d.begin(), d.end());
        per_doc.push_back(std::move(sentences));
      }
      std::optional<double> tau;
      if (config_.chunk_global_threshold && !all_distances.empty()) {
        tau = NearestRankPercentile(all_distances, config_.chunk_percentile);
      }
      std::vector<Chunk> chunks;
      for (size_t i = 0; i < per_doc.size(); ++i) {
        const Language lang = corpus.LanguageOf(per_doc[i].front().doc_id);
        for (auto& c : SemanticChunk(per_doc[i], vectors[i], options, lang, tau)) {
          chunks.push_back(std::move(c));
        }
      }
      json meta = {{"percentile", config_.chunk_percentile},
                   {"embedder", Embedder().id()}};
      if (tau) meta["global_tau"] = *tau;
      Snapshot(chunks, dir / artifacts::kChunks, Header(schemas::kChunks, meta));
    };
    return plan;
  }

  if (command == "tree") {
    plan.params = {{"tree", cfg["tree"]},
                   {"chat", cfg["providers"]["chat"]},
                   {"language", cfg["run"]["language"]},
                   {"seed", config_.master_seed}};
    plan.inputs = {artifacts::kChunks};
    plan.outputs = {artifacts::kTree, artifacts::kGmmReport};
    plan.body = [this, dir] {
      const auto chunks = Load<Chunk>(dir / artifacts::kChunks, schemas::kChunks, schemas::kVersion);
      TreeOptions options;
      options.target_dim = config_.target_dim;
      options.k_max = config_.k_max;
      options.n_restarts = config_.gmm_restarts;
      options.membership_floor = config_.membership_floor;
      options.max_levels = config_.max_levels;
      options.seed = DeriveSeed(config_.master_seed, "tree", "");
      options.parallelism = config_.parallelism;
      options.summary_model = config_.chat.model;
      options.em.penalty = config_.bic_penalty;
      ChatClient chat(MakeChat("generator", config_.chat.model), Cache(), config_.parallelism);
      PcaProjector projector(DeriveSeed(config_.master_seed, "projection", ""));
      auto write = [&](const SummaryTree& tree, const fs::path& tree_path) {
        json levels = json::array();
        for (const auto& level : tree.levels) levels.push_back(LevelReportJson(level));
        Snapshot(tree.nodes, tree_path,
                 Header(schemas::kTree, {{"stop_reason", tree.stop_reason},
                                         {"projector", projector.id()}}));
        WriteFileAtomic(dir / artifacts::kGmmReport,
                        PrettyJson({{"config_digest", config_digest_},
                                    {"stop_reason", tree.stop_reason},
                                    {"levels", levels}}));
      };
      try {
        const SummaryTree tree =
            BuildSummaryTree(chunks, chat, Embedder(), projector, options, config_.language);
        ValidateTree(tree);
        write(tree, dir / artifacts::kTree);
      } catch (const TreeBuildError& e) {
        write(e.partial(), dir / "tree.partial.jsonl");
        throw;
      }
    };
    return plan;
  }

  if (command == "extract") {
    plan.params = {{"chat", cfg["providers"]["chat"]},
                   {"theta", cfg["kg"]["theta"]},
                   {"counting_unit", cfg["kg"]["counting_unit"]},
                   {"language", cfg["run"]["language"]}};
    plan.inputs = {artifacts::kDocuments, artifacts::kSentences, artifacts::kChunks,
                   artifacts::kTree};
    if (config_.chat.kind == "mock" && !options_.chat_factory) {
      plan.inputs.push_back(ExternalName(config_.Resolve(config_.mock_triplets_path)));
    }
    plan.outputs = {artifacts::kTriplets, artifacts::kRejectedTriplets, artifacts::kGraph,
                    artifacts::kGraphBuildReport};
    plan.body = [this, dir] {
      const CorpusStore corpus = LoadRunCorpus(dir, true);
      JsonlDocument tree_doc = ReadJsonl(dir / artifacts::kTree, schemas::kTree, schemas::kVersion);
      SummaryTree tree;
      for (const auto& row : tree_doc.records) tree.nodes.push_back(row.get<SummaryTreeNode>());
      tree.stop_reason = tree_doc.header.meta.value("stop_reason", "");
      ExtractionOptions options;
      options.model = config_.chat.model;
      options.parallelism = config_.parallelism;
      ChatClient chat(MakeChat("generator", config_.chat.model), Cache(), config_.parallelism);
      const auto results = ExtractAll(tree, corpus, chat, options);

      std::vector<RawTriplet> accepted;
      std::vector<RejectedTriplet> rejected;
      long failed_nodes = 0;
      for (const auto& r : results) {
        accepted.insert(accepted.end(), r.accepted.begin(), r.accepted.end());
        rejected.insert(rejected.end(), r.rejected.begin(), r.rejected.end());
        if (r.error) {
          ++failed_nodes;
          rejected.push_back({r.node_id, nullptr, "extraction failed: " + *r.error});
        }
      }
      if (!results.empty() && failed_nodes == static_cast<long>(results.size())) {
        Fail(ErrorKind::kExtraction, "no tree node produced a valid extraction reply");
      }
      GraphBuildOptions build{config_.theta, config_.counting_unit,
                              TokenModeFor(config_.language)};
      GraphBuildReport report;
      const KnowledgeGraph graph = BuildGraph(accepted, build, &report);
      Snapshot(accepted, dir / artifacts::kTriplets, Header(schemas::kTriplets));
      Snapshot(rejected, dir / artifacts::kRejectedTriplets,
               Header(schemas::kRejectedTriplets, {{"failed_nodes", failed_nodes}}));
      WriteGraph(graph, dir / artifacts::kGraph);
      json report_json = BuildReportJson(report);
      report_json["config_digest"] = config_digest_;
      WriteFileAtomic(dir / artifacts::kGraphBuildReport, PrettyJson(report_json));
    };
    return plan;
  }

  auto stoplist_inputs = [this](StagePlan& p) {
    if (!config_.stoplist_path.empty()) {
      p.inputs.push_back(ExternalName(config_.Resolve(config_.stoplist_path)));
    }
  };
  auto load_stoplist = [this] {
    return config_.stoplist_path.empty() ? Stoplist{}
                                         : LoadStoplist(config_.Resolve(config_.stoplist_path));
  };

  if (command == "shatter") {
    plan.params = {{"k_threshold", cfg["kg"]["k_threshold"]}, {"stoplist", cfg["kg"]["stoplist"]}};
    plan.inputs = {artifacts::kGraph};
    stoplist_inputs(plan);
    plan.outputs = {artifacts::kShatteredGraph, artifacts::kTopologyReport};
    plan.body = [this, dir, load_stoplist] {
      const KnowledgeGraph original = ReadGraph(dir / artifacts::kGraph);
      const KnowledgeGraph shattered = Shatter(original, config_.k_threshold, load_stoplist());
      long pruned = 0;
      for (const auto& e : shattered.entities()) pruned += e.is_pruned ? 1 : 0;
      auto topology = [](const KnowledgeGraph& g) -> json {
        if (g.NodeCount() == 0) return nullptr;
        return ComputeTopology(g);
      };
      WriteGraph(shattered, dir / artifacts::kShatteredGraph);
      WriteFileAtomic(dir / artifacts::kTopologyReport,
                      PrettyJson({{"config_digest", config_digest_},
                                  {"k_threshold", FormatK(config_.k_threshold)},
                                  {"stoplist_id", shattered.stoplist_id()},
                                  {"pruned_entities", pruned},
                                  {"original", topology(original)},
                                  {"shattered", topology(shattered)}}));
    };
    return plan;
  }

  if (command == "shatter-sweep") {
    plan.params = {{"sweep_k", cfg["kg"]["sweep_k"]}, {"stoplist", cfg["kg"]["stoplist"]}};
    plan.inputs = {artifacts::kGraph};
    stoplist_inputs(plan);
    plan.outputs = {artifacts::kTopologySweep};
    plan.body = [this, dir, load_stoplist] {
      const KnowledgeGraph original = ReadGraph(dir / artifacts::kGraph);
      json sweep = SweepJson(ShatterSweep(original, config_.sweep_k, load_stoplist()));
      WriteFileAtomic(dir / artifacts::kTopologySweep,
                      PrettyJson({{"config_digest", config_digest_}, {"sweep", sweep}}));
    };
    return plan;
  }

  if (command == "mine") {
    plan.params = {{"max_chains_per_source", config_.max_chains_per_source},
                   {"max_chains", config_.max_chains}};
    plan.inputs = {artifacts::kShatteredGraph};
    plan.outputs = {artifacts::kChains};
    plan.body = [this, dir] {
      const KnowledgeGraph graph = ReadGraph(dir / artifacts::kShatteredGraph);
      const auto chains =
          MineChains(graph, MineLimits{config_.max_chains_per_source, config_.max_chains});
      Snapshot(chains, dir / artifacts::kChains,
               Header(schemas::kChains, {{"k_threshold", FormatK(graph.k_threshold())},
                                         {"stoplist_id", graph.stoplist_id()}}));
    };
    return plan;
  }

  if (command == "synthesize") {
    plan.params = {{"synthesis", cfg["synthesis"]},
                   {"chat", cfg["providers"]["chat"]},
                   {"mock_leak_rate", config_.mock_leak_rate},
                   {"language", cfg["run"]["language"]},
                   {"seed", config_.master_seed}};
    plan.inputs = {artifacts::kDocuments, artifacts::kSentences, artifacts::kChunks,
                   artifacts::kShatteredGraph, artifacts::kChains};
    plan.outputs = {artifacts::kSynthesized, artifacts::kCompletedChains, artifacts::kDiscards};
    plan.body = [this, dir] {
      const CorpusStore corpus = LoadRunCorpus(dir, true);
      const KnowledgeGraph graph = ReadGraph(dir / artifacts::kShatteredGraph);
      const auto chains =
          Load<ReasoningChain>(dir / artifacts::kChains, schemas::kChains, schemas::kVersion);
      SynthesisOptions options;
      options.n_options = config_.n_options;
      options.difficulty = config_.difficulty;
      options.model = config_.chat.model;
      options.temperature = config_.temperature;
      options.max_retries = config_.max_retries;
      options.parallelism = config_.parallelism;
      options.master_seed = config_.master_seed;
      ChatClient chat(MakeChat("generator", config_.chat.model), Cache(), config_.parallelism);
      const SynthesisOutcome outcome = SynthesizeDataset(chains, graph, corpus, chat, options);
      Snapshot(outcome.items, dir / artifacts::kSynthesized,
               JsonlHeader{kDatasetSchema, kDatasetSchemaVersion, {{"stage", "draft"}}});
      Snapshot(outcome.chains, dir / artifacts::kCompletedChains, Header(schemas::kChains));
      Snapshot(outcome.discards, dir / artifacts::kDiscards, Header(schemas::kDiscards));
      Log("synthesize: " + std::to_string(outcome.items.size()) + " items, " +
          std::to_string(outcome.discards.size()) + " discards");
    };
    return plan;
  }

  if (command == "adjudicate") {
    plan.params = {{"ensemble", cfg["providers"]["ensemble"]},
                   {"chat", cfg["providers"]["chat"]}};
    plan.inputs = {artifacts::kSynthesized};
    plan.outputs = {artifacts::kDataset};
    plan.body = [this, dir] {
      auto items = Load<QAItem>(dir / artifacts::kSynthesized, kDatasetSchema,
                                kDatasetSchemaVersion);
      std::vector<std::unique_ptr<ChatClient>> clients;
      std::vector<ChatClient*> ensemble;
      for (const auto& member : config_.ensemble) {
        clients.push_back(
            std::make_unique<ChatClient>(MakeChat("judge", member), Cache(), config_.parallelism));
        ensemble.push_back(clients.back().get());
      }
      AdjudicationOptions options;
      options.models = config_.ensemble;
      options.parallelism = config_.parallelism;
      const AdjudicationSummary summary = AdjudicateDataset(items, ensemble, options);
      Snapshot(items, dir / artifacts::kDataset,
               JsonlHeader{kDatasetSchema, kDatasetSchemaVersion,
                           {{"stage", "adjudicated"},
                            {"scored", summary.scored},
                            {"unscored_qa_ids", summary.unscored_qa_ids}}});
    };
    return plan;
  }

  if (command == "stats") {
    plan.params = {{"embedding", cfg["providers"]["embedding"]},
                   {"embedding_dim", config_.embedding_dim},
                   {"seed", config_.master_seed}};
    plan.inputs = {artifacts::kDocuments, artifacts::kSentences, artifacts::kChunks,
                   artifacts::kDataset};
    plan.outputs = {artifacts::kStatsReport};
    plan.body = [this, dir] {
      const CorpusStore corpus = LoadRunCorpus(dir, true);
      const auto items = Load<QAItem>(dir / artifacts::kDataset, kDatasetSchema,
                                      kDatasetSchemaVersion);
      json report = StatsReportJson(ComputeOverlapStats(items, corpus, Embedder()));
      report["config_digest"] = config_digest_;
      WriteFileAtomic(dir / artifacts::kStatsReport, PrettyJson(report));
    };
    return plan;
  }

  if (command == "evaluate") {
    const auto models = ModelsFor(config_, args);
    Require(models.size() == 1, "evaluate: pass --model (the config lists several models)");
    const std::string model = models.front();
    const EvalMode mode = args.mode;
    RetrievalConfig retrieval = config_.retrieval;
    if (args.context_k) retrieval.context_size = *args.context_k;
    if (args.coarse_pool) retrieval.coarse_pool_size = *args.coarse_pool;
    if (args.rerank_keep) retrieval.rerank_keep = *args.rerank_keep;
    const uint64_t seed = args.seed.value_or(config_.master_seed);
    const std::string outcomes = OutcomesFileName(model, mode);

    plan.key = "evaluate:" + model + ":" + EvalModeName(mode);
    plan.params = {{"model", model},
                   {"mode", EvalModeName(mode)},
                   {"chat", cfg["providers"]["chat"]},
                   {"template", kPromptTemplateId}};
    plan.inputs = {artifacts::kDataset};
    plan.outputs = {outcomes};
    if (mode == EvalMode::kRag) {
      ValidateRetrievalConfig(retrieval);
      plan.params["retrieval"] = retrieval;
      plan.params["seed"] = seed;
      plan.params["embedding"] = cfg["providers"]["embedding"];
      plan.params["embedding_dim"] = config_.embedding_dim;
      plan.params["rerank"] = cfg["providers"]["rerank"];
      plan.inputs.insert(plan.inputs.end(),
                         {artifacts::kDocuments, artifacts::kSentences, artifacts::kChunks});
      plan.outputs.push_back(ContextsFileName(model));
    }
    plan.before_rerun = [dir, outcomes] { fs::remove(dir / outcomes); };
    plan.body = [this, dir, model, mode, retrieval, seed, outcomes] {
      const auto items = Load<QAItem>(dir / artifacts::kDataset, kDatasetSchema,
                                      kDatasetSchemaVersion);
      std::map<std::string, RagContext> contexts;
      if (mode == EvalMode::kRag) {
        const CorpusStore corpus = LoadRunCorpus(dir, true);
        const CorpusIndex index(corpus, Embedder());
        auto reranker = MakeReranker(config_.rerank);
        std::vector<RagContext> built;
        for (const auto& item : items) {
          built.push_back(BuildRagContext(item, index, Embedder(), reranker.get(), retrieval,
                                          DeriveSeed(seed, "rag-context", item.qa_id)));
          contexts[item.qa_id] = built.back();
        }
        Snapshot(built, dir / ContextsFileName(model),
                 Header(schemas::kContexts, {{"retrieval", retrieval}, {"seed", seed}}));
      }
      ChatClient chat(MakeChat("eval", model), Cache(), config_.parallelism);
      EvalOptions options;
      options.model_id = model;
      options.model_name = model;
      options.parallelism = config_.parallelism;
      options.outcomes_path = dir / outcomes;
      EvaluateDataset(items, chat, mode, mode == EvalMode::kRag ? &contexts : nullptr, options);
    };
    return plan;
  }

  if (command == "report") {
    const auto models = ModelsFor(config_, args);
    if (args.model) plan.key = "report:" + *args.model;
    plan.params = {{"models", models}, {"template", kPromptTemplateId}};
    plan.inputs = {artifacts::kDataset};
    for (const auto& model : models) {
      plan.inputs.push_back(OutcomesFileName(model, EvalMode::kZeroShot));
      const std::string rag = OutcomesFileName(model, EvalMode::kRag);
      if (fs::exists(dir / rag)) plan.inputs.push_back(rag);
      plan.outputs.push_back(ReportFileName(model));
    }
    if (!args.model) plan.outputs.push_back(artifacts::kReportTable);
    plan.body = [this, dir, models, with_table = !args.model] {
      const auto items = Load<QAItem>(dir / artifacts::kDataset, kDatasetSchema,
                                      kDatasetSchemaVersion);
      std::vector<BehavioralReport> reports;
      for (const auto& model : models) {
        const auto zero = Load<EvalOutcome>(dir / OutcomesFileName(model, EvalMode::kZeroShot),
                                            kOutcomeSchema, kOutcomeSchemaVersion);
        std::optional<std::vector<EvalOutcome>> rag;
        if (fs::exists(dir / OutcomesFileName(model, EvalMode::kRag))) {
          rag = Load<EvalOutcome>(dir / OutcomesFileName(model, EvalMode::kRag), kOutcomeSchema,
                                  kOutcomeSchemaVersion);
        }
        reports.push_back(MakeBehavioralReport(model, zero, rag ? &*rag : nullptr, items));
        json report = BehavioralReportJson(reports.back());
        report["config_digest"] = config_digest_;
        WriteFileAtomic(dir / ReportFileName(model), PrettyJson(report));
      }
      if (with_table) WriteFileAtomic(dir / artifacts::kReportTable, RenderBehavioralTable(reports));
    };
    return plan;
  }

  Fail(ErrorKind::kValidation, "unknown command '" + command + "'");
}

}  // namespace kgbench
