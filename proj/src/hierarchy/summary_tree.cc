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

#include "kgbench/hierarchy/summary_tree.h"

#include <algorithm>
#include <map>
#include <set>

#include "kgbench/providers/task.h"
#include "kgbench/util/digest.h"
#include "kgbench/util/parallel.h"

namespace kgbench {
namespace {

struct LevelInput {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  std::vector<EmbeddingVector> embeddings;
};

constexpr double kWeightSlack = 1e-9;

}  // namespace

void to_json(nlohmann::json& j, const TreeMember& m) {
  j = {{"id", m.id}, {"weight", m.weight}};
}

void from_json(const nlohmann::json& j, TreeMember& m) {
  m.id = j.at("id").get<std::string>();
  m.weight = j.at("weight").get<double>();
}

void to_json(nlohmann::json& j, const SummaryTreeNode& n) {
  j = {{"node_id", n.node_id},
       {"level", n.level},
       {"members", n.members},
       {"summary_text", n.summary_text}};
  j["cluster_model_ref"] =
      n.cluster_model_ref ? nlohmann::json(*n.cluster_model_ref) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, SummaryTreeNode& n) {
  n.node_id = j.at("node_id").get<std::string>();
  n.level = j.at("level").get<int>();
  n.members = j.at("members").get<std::vector<TreeMember>>();
  n.summary_text = j.value("summary_text", std::string());
  n.cluster_model_ref.reset();
  if (j.contains("cluster_model_ref") && !j["cluster_model_ref"].is_null()) {
    n.cluster_model_ref = j["cluster_model_ref"].get<std::string>();
  }
}

nlohmann::json LevelReportJson(const TreeLevelReport& r) {
  return {{"level", r.level},
          {"n_points", r.n_points},
          {"projected_dim", r.projected_dim},
          {"projector_id", r.projector_id},
          {"rank_correlation", r.rank_correlation},
          {"k_max", r.k_max},
          {"k_star", r.k_star},
          {"candidate_k", r.candidate_k},
          {"bic_curve", r.bic_curve},
          {"log_likelihood_curve", r.log_likelihood_curve},
          {"inadmissible_fits", r.inadmissible_fits},
          {"best", MixtureSummary(r.best)}};
}

const SummaryTreeNode* SummaryTree::Find(const std::string& node_id) const {
  for (const auto& n : nodes) {
    if (n.node_id == node_id) return &n;
  }
  return nullptr;
}

int SummaryTree::max_level() const {
  int out = 0;
  for (const auto& n : nodes) out = std::max(out, n.level);
  return out;
}

std::vector<std::vector<TreeMember>> ClusterMembers(const Eigen::MatrixXd& gamma,
                                                    const std::vector<std::string>& ids,
                                                    double floor) {
  Require(gamma.rows() == static_cast<Eigen::Index>(ids.size()),
          "responsibility rows do not match member ids");
  std::vector<std::vector<TreeMember>> clusters(gamma.cols());
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    Eigen::Index arg = 0;
    gamma.row(i).maxCoeff(&arg);
    for (Eigen::Index k = 0; k < gamma.cols(); ++k) {
      if (gamma(i, k) >= floor || k == arg) clusters[k].push_back({ids[i], gamma(i, k)});
    }
  }
  return clusters;
}

ChatRequest SummaryRequest(const std::vector<std::string>& member_texts, Language language,
                           const TreeOptions& options) {
  const nlohmann::json payload = {{"language", LanguageTag(language)},
                                  {"members", member_texts}};
  std::string prompt(kSummaryTaskHeader);
  prompt +=
      "\nYou are given passages from medical documents that were grouped together by "
      "topic. Write one concise abstract summary that integrates their clinical "
      "content, keeping the entity names used in the passages. Write in the language "
      "named in the payload. Reply with the summary text only.\n\n";
  prompt += payload.dump();
  ChatRequest request;
  request.messages = {{"user", prompt}};
  request.temperature = 0.0;
  request.max_output_tokens = options.summary_max_tokens;
  request.model_name = options.summary_model;
  return request;
}

SummaryTree BuildSummaryTree(const std::vector<Chunk>& chunks, ChatClient& chat,
                             EmbeddingProvider& embedder, Projector& projector,
                             const TreeOptions& options, Language language) {
  Require(!chunks.empty(), "build_summary_tree needs at least one chunk");
  Require(options.membership_floor > 0.0 && options.membership_floor <= 1.0,
          "membership_floor must be in (0, 1]");
  Require(options.target_dim >= 1, "target_dim must be >= 1");
  Require(options.min_points_per_cluster >= 1, "min_points_per_cluster must be >= 1");

  SummaryTree tree;
  LevelInput current;
  std::set<std::string> seen;
  for (const auto& c : chunks) {
    Require(seen.insert(c.chunk_id).second, "duplicate chunk_id " + c.chunk_id);
    tree.nodes.push_back({c.chunk_id, 0, {}, "", std::nullopt});
    current.ids.push_back(c.chunk_id);
    current.texts.push_back(c.text);
    current.embeddings.push_back(c.embedding);
  }

  for (int level = 1;; ++level) {
    const int n = static_cast<int>(current.ids.size());
    if (n <= 2) {
      tree.stop_reason = n == 1 ? "single root" : "two or fewer nodes";
      break;
    }
    if (level > options.max_levels) {
      tree.stop_reason = "max_levels reached";
      break;
    }
    const int src_dim = current.embeddings.front().dimension;
    const int k_max = std::max(1, std::min(options.k_max, n / options.min_points_per_cluster));
    const int dim = std::max(1, std::min({options.target_dim, src_dim - 1, n / k_max - 1}));

    const uint64_t level_seed = DeriveSeed(options.seed, "tree", "level-" + std::to_string(level));
    TreeLevelReport report;
    report.level = level;
    report.n_points = n;
    report.projected_dim = dim;
    report.projector_id = projector.id();
    report.k_max = k_max;
    Projection projection = ReduceDimensions(current.embeddings, current.ids, dim, projector);
    report.rank_correlation = projection.rank_correlation;
    EmOptions em = options.em;
    em.parallelism = options.parallelism;
    const Eigen::MatrixXd z = PointsMatrix(projection.points);
    ClusterCountSelection selection =
        SelectClusterCount(z, k_max, level_seed, options.n_restarts, em);
    report.k_star = selection.best_k;
    report.candidate_k = selection.candidate_k;
    report.bic_curve = selection.bic_curve;
    report.log_likelihood_curve = selection.log_likelihood_curve;
    report.inadmissible_fits = selection.inadmissible_fits;
    const SoftAssignment assignment = SoftAssign(selection.best, z);
    report.best = std::move(selection.best);
    const int k_star = report.k_star;

    const std::vector<std::vector<TreeMember>> clusters =
        ClusterMembers(assignment.gamma, current.ids, options.membership_floor);
    std::vector<int> live;
    for (int k = 0; k < k_star; ++k) {
      if (!clusters[k].empty()) live.push_back(k);
    }
    tree.levels.push_back(std::move(report));
    if (static_cast<int>(live.size()) >= n) {
      tree.stop_reason = "no reduction in node count";
      break;
    }

    std::map<std::string, size_t> index_of;
    for (int i = 0; i < n; ++i) index_of[current.ids[i]] = static_cast<size_t>(i);
    std::vector<std::string> summaries(live.size());
    try {
      ParallelFor(live.size(), static_cast<size_t>(options.parallelism), [&](size_t c) {
        std::vector<TreeMember> ordered = clusters[live[c]];
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const TreeMember& a, const TreeMember& b) {
                           return a.weight > b.weight;
                         });
        std::vector<std::string> texts;
        for (const auto& m : ordered) texts.push_back(current.texts[index_of.at(m.id)]);
        summaries[c] = chat.Complete(SummaryRequest(texts, language, options));
      });
    } catch (const Error& e) {
      throw TreeBuildError("summarizing level " + std::to_string(level) + ": " + e.what(), tree);
    }

    LevelInput next;
    for (size_t c = 0; c < live.size(); ++c) {
      SummaryTreeNode node;
      node.level = level;
      node.node_id = "L" + std::to_string(level) + "-" + std::to_string(c);
      node.members = clusters[live[c]];
      node.summary_text = summaries[c];
      node.cluster_model_ref = "level-" + std::to_string(level) + "/K=" +
                               std::to_string(k_star) + "/component-" +
                               std::to_string(live[c]);
      next.ids.push_back(node.node_id);
      next.texts.push_back(node.summary_text);
      tree.nodes.push_back(std::move(node));
    }
    try {
      next.embeddings = EmbedTexts(embedder, next.texts);
    } catch (const Error& e) {
      throw TreeBuildError("embedding level " + std::to_string(level) + " summaries: " + e.what(),
                           tree);
    }
    if (k_star == 1) {
      tree.stop_reason = "single root";
      break;
    }
    current = std::move(next);
  }
  ValidateTree(tree);
  return tree;
}

void ValidateTree(const SummaryTree& tree) {
  std::map<std::string, int> level_of;
  for (const auto& n : tree.nodes) {
    Require(level_of.emplace(n.node_id, n.level).second, "duplicate tree node " + n.node_id);
    Require(n.level >= 0, "negative level on " + n.node_id);
    Require(n.level == 0 || !n.members.empty(), "summary node " + n.node_id + " has no members");
    Require(n.level > 0 || n.members.empty(), "leaf " + n.node_id + " has members");
  }
  std::map<std::string, double> parent_weight;
  for (const auto& n : tree.nodes) {
    for (const auto& m : n.members) {
      auto it = level_of.find(m.id);
      Require(it != level_of.end(), n.node_id + " references unknown member " + m.id);
      Require(it->second < n.level, n.node_id + " has member " + m.id + " at a level not below it");
      Require(m.weight >= 0.0 && m.weight <= 1.0 + kWeightSlack,
              "membership weight out of range on " + n.node_id);
      parent_weight[m.id] += m.weight;
    }
  }
  for (const auto& [id, total] : parent_weight) {
    Require(total <= 1.0 + kWeightSlack,
            "weights of " + id + " across parents sum to " + std::to_string(total));
  }
}

std::vector<std::string> LeafDescendants(const SummaryTree& tree, const std::string& node_id) {
  std::map<std::string, const SummaryTreeNode*> by_id;
  for (const auto& n : tree.nodes) by_id[n.node_id] = &n;
  std::set<std::string> leaves;
  std::set<std::string> visited;
  std::vector<std::string> stack = {node_id};
  while (!stack.empty()) {
    const std::string id = stack.back();
    stack.pop_back();
    if (!visited.insert(id).second) continue;
    auto it = by_id.find(id);
    Require(it != by_id.end(), "unknown tree node " + id);
    if (it->second->level == 0) {
      leaves.insert(id);
      continue;
    }
    for (const auto& m : it->second->members) stack.push_back(m.id);
  }
  return {leaves.begin(), leaves.end()};
}

}  // namespace kgbench
