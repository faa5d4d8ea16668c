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


// Command-line front end: one subcommand per pipeline stage.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kgbench/pipeline/pipeline.h"
#include "kgbench/util/error.h"

namespace {

struct Flags {
  std::string config_path;
  std::string run_dir = "run";
  bool force = false;
  bool quiet = false;
  std::string model;
  std::string mode = "zero_shot";
  std::optional<int> context_k;
  std::optional<int> coarse_pool;
  std::optional<int> rerank_keep;
  std::optional<uint64_t> seed;
};

void AddCommonFlags(CLI::App* app, Flags& flags) {
  app->add_option("-c,--config", flags.config_path, "Pipeline config (INI)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("-r,--run-dir", flags.run_dir, "Run directory")->capture_default_str();
  app->add_flag("--force", flags.force, "Continue although the config digest changed");
  app->add_flag("-q,--quiet", flags.quiet, "Suppress progress messages");
}

kgbench::Pipeline MakePipeline(const Flags& flags) {
  kgbench::PipelineOptions options;
  options.force = flags.force;
  if (!flags.quiet) {
    options.log = [](const std::string& message) { std::cerr << message << "\n"; };
  }
  return kgbench::Pipeline(kgbench::LoadPipelineConfig(flags.config_path), flags.run_dir,
                           std::move(options));
}

int Dispatch(const std::string& command, const Flags& flags) {
  kgbench::Pipeline pipeline = MakePipeline(flags);
  if (command == "all") {
    pipeline.RunAll();
    return 0;
  }
  if (command == "verify") {
    const auto problems = kgbench::VerifyManifest(pipeline.manifest(), pipeline.run_dir());
    for (const auto& p : problems) std::cout << p << "\n";
    if (problems.empty()) std::cout << "manifest complete\n";
    return problems.empty() ? 0 : 1;
  }
  kgbench::CommandArgs args;
  if (!flags.model.empty()) args.model = flags.model;
  args.mode = kgbench::ParseEvalMode(flags.mode);
  args.context_k = flags.context_k;
  args.coarse_pool = flags.coarse_pool;
  args.rerank_keep = flags.rerank_keep;
  args.seed = flags.seed;
  const kgbench::StageResult result = pipeline.Run(command, args);
  if (result.skipped && flags.quiet) return 0;
  for (const auto& out : result.outputs) {
    std::cout << (pipeline.run_dir() / out).string() << (result.skipped ? " (unchanged)" : "")
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgbench: corpus-to-benchmark pipeline"};
  app.require_subcommand(1);
  Flags flags;
  std::string selected;

  std::vector<std::string> commands = kgbench::PipelineCommands();
  commands.push_back("all");
  commands.push_back("verify");
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    AddCommonFlags(sub, flags);
    if (name == "evaluate" || name == "report") {
      sub->add_option("--model", flags.model, "Model id (defaults to the configured list)");
    }
    if (name == "evaluate") {
      sub->add_option("--mode", flags.mode, "zero_shot or rag")
          ->check(CLI::IsMember({"zero_shot", "rag"}))
          ->capture_default_str();
      sub->add_option("--context-k", flags.context_k, "Documents per RAG context");
      sub->add_option("--coarse-pool", flags.coarse_pool, "Dense retrieval pool size");
      sub->add_option("--rerank-keep", flags.rerank_keep, "Passages kept after reranking");
      sub->add_option("--seed", flags.seed, "Seed for golden-passage placement");
    }
    sub->callback([&selected, name] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return Dispatch(selected, flags);
  } catch (const kgbench::Error& e) {
    std::cerr << "error [" << kgbench::ErrorKindName(e.kind()) << "]: " << e.what() << "\n";
    return kgbench::ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
