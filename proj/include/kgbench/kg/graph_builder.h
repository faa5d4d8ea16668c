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

#ifndef KGBENCH_KG_GRAPH_BUILDER_H_
#define KGBENCH_KG_GRAPH_BUILDER_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/kg/alignment.h"
#include "kgbench/kg/extraction.h"
#include "kgbench/kg/graph.h"

namespace kgbench {

struct GraphBuildOptions {
  ThetaSchedule theta;
  CountingUnit counting_unit = CountingUnit::kTreeNodes;
  TokenMode token_mode = TokenMode::kWord;
};

struct GraphBuildReport {
  long raw_triplets = 0;
  long edges = 0;
  long entities = 0;
  long exact_matches = 0;
  long fuzzy_merges = 0;
  long dropped_self_loops = 0;
  std::vector<nlohmann::json> merges;  // {surface, entity_id, canonical_name, distance}
  std::map<std::string, long> frequencies_tree_nodes;
  std::map<std::string, long> frequencies_mentions;
};

nlohmann::json BuildReportJson(const GraphBuildReport& report);

// Resolves head and tail strings in input order: a MaxMatch alignment that
// covers the whole surface picks that entity, otherwise FuzzyMerge may fold
// the surface into an existing entity as an alias, otherwise a new entity is
// created. Frequencies use `counting_unit`. Returns the original view.
KnowledgeGraph BuildGraph(const std::vector<RawTriplet>& raw, const GraphBuildOptions& options,
                          GraphBuildReport* report = nullptr);

}  // namespace kgbench

#endif  // KGBENCH_KG_GRAPH_BUILDER_H_
