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

#ifndef KGBENCH_HIERARCHY_SUMMARY_TREE_H_
#define KGBENCH_HIERARCHY_SUMMARY_TREE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/corpus/corpus.h"
#include "kgbench/hierarchy/gmm.h"
#include "kgbench/hierarchy/projection.h"
#include "kgbench/providers/chat.h"
#include "kgbench/providers/embedding.h"
#include "kgbench/util/error.h"

namespace kgbench {

struct TreeMember {
  std::string id;
  double weight = 1.0;
};

// Level 0 nodes are the chunks themselves (node_id == chunk_id, no members).
struct SummaryTreeNode {
  std::string node_id;
  int level = 0;
  std::vector<TreeMember> members;
  std::string summary_text;
  std::optional<std::string> cluster_model_ref;
};

void to_json(nlohmann::json& j, const TreeMember& m);
void from_json(const nlohmann::json& j, TreeMember& m);
void to_json(nlohmann::json& j, const SummaryTreeNode& n);
void from_json(const nlohmann::json& j, SummaryTreeNode& n);

struct TreeLevelReport {
  int level = 0;  // level being built
  int n_points = 0;
  int projected_dim = 0;
  std::string projector_id;
  double rank_correlation = 0.0;
  int k_max = 0;
  int k_star = 0;
  std::vector<int> candidate_k;
  std::vector<double> bic_curve;
  std::vector<double> log_likelihood_curve;
  std::vector<int> inadmissible_fits;
  GaussianMixture best;
};

nlohmann::json LevelReportJson(const TreeLevelReport& report);

struct SummaryTree {
  std::vector<SummaryTreeNode> nodes;  // ordered by level, then creation
  std::vector<TreeLevelReport> levels;
  std::string stop_reason;

  const SummaryTreeNode* Find(const std::string& node_id) const;
  int max_level() const;
};

struct TreeOptions {
  int target_dim = 10;
  int k_max = 50;
  int n_restarts = 4;
  double membership_floor = 0.10;
  int max_levels = 4;
  // Caps K at N / min_points_per_cluster and the projected dimension at
  // N / K_max - 1 so every candidate mixture stays estimable.
  int min_points_per_cluster = 3;
  uint64_t seed = 0;
  int parallelism = 1;
  std::string summary_model;
  int summary_max_tokens = 512;
  EmOptions em;
};

class TreeBuildError : public Error {
 public:
  TreeBuildError(const std::string& message, SummaryTree partial)
      : Error(ErrorKind::kStage, message), partial_(std::move(partial)) {}
  const SummaryTree& partial() const { return partial_; }

 private:
  SummaryTree partial_;
};

// Members of each cluster: every id whose responsibility reaches `floor`,
// plus each id under its argmax cluster. Weights are the responsibilities.
std::vector<std::vector<TreeMember>> ClusterMembers(const Eigen::MatrixXd& gamma,
                                                    const std::vector<std::string>& ids,
                                                    double floor);

// The chat request used to summarize one cluster.
ChatRequest SummaryRequest(const std::vector<std::string>& member_texts,
                           Language language, const TreeOptions& options);

// Builds the tree bottom-up until a single root, at most two nodes, or
// `max_levels` summary levels. Chat or embedding failures raise
// TreeBuildError holding every completed level.
SummaryTree BuildSummaryTree(const std::vector<Chunk>& chunks, ChatClient& chat,
                             EmbeddingProvider& embedder, Projector& projector,
                             const TreeOptions& options, Language language = Language::kEn);

// Checks member references, level monotonicity and per-child weight sums.
void ValidateTree(const SummaryTree& tree);

// Chunk ids reachable below `node_id` (the node itself for a leaf), sorted.
std::vector<std::string> LeafDescendants(const SummaryTree& tree, const std::string& node_id);

}  // namespace kgbench

#endif  // KGBENCH_HIERARCHY_SUMMARY_TREE_H_
