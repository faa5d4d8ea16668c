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

#ifndef KGBENCH_KG_GRAPH_H_
#define KGBENCH_KG_GRAPH_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/util/jsonl.h"

namespace kgbench {

enum class PruneReason { kNone, kOverK, kStoplist };
enum class GraphView { kOriginal, kShattered };
enum class CountingUnit { kTreeNodes, kMentions };

const char* PruneReasonName(PruneReason reason);
const char* GraphViewName(GraphView view);
const char* CountingUnitName(CountingUnit unit);
CountingUnit ParseCountingUnit(const std::string& name);

struct Entity {
  std::string entity_id;
  std::string canonical_name;
  std::set<std::string> aliases;
  long frequency = 0;
  bool is_pruned = false;
  PruneReason prune_reason = PruneReason::kNone;
};

struct Evidence {
  std::string chunk_id;
  int sentence_start = 0;  // inclusive document sentence indices
  int sentence_end = 0;
  int page_anchor = 1;
};

struct Triplet {
  std::string head;  // entity ids
  std::string relation;
  std::string tail;
  Evidence evidence;
  double confidence = 1.0;
  std::string source_node;  // tree node the triplet was extracted from
};

void to_json(nlohmann::json& j, const Entity& e);
void from_json(const nlohmann::json& j, Entity& e);
void to_json(nlohmann::json& j, const Evidence& e);
void from_json(const nlohmann::json& j, Evidence& e);
void to_json(nlohmann::json& j, const Triplet& t);
void from_json(const nlohmann::json& j, Triplet& t);

// k = nullopt means no frequency threshold.
using KThreshold = std::optional<long>;
std::string FormatK(const KThreshold& k);
KThreshold ParseK(const std::string& text);  // integer >= 1 or "inf"

class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(std::vector<Entity> entities, std::vector<Triplet> edges);

  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Triplet>& edges() const { return edges_; }
  GraphView view() const { return view_; }
  const KThreshold& k_threshold() const { return k_threshold_; }
  const std::string& stoplist_id() const { return stoplist_id_; }
  CountingUnit counting_unit() const { return counting_unit_; }

  const Entity* FindEntity(const std::string& entity_id) const;
  // Match on NormalizeForMatch of canonical names and aliases.
  const Entity* FindByName(const std::string& name) const;
  size_t IndexOf(const std::string& entity_id) const;  // throws kValidation

  // Edge indices leaving / entering an entity.
  const std::vector<size_t>& OutEdges(size_t entity_index) const { return out_[entity_index]; }
  const std::vector<size_t>& InEdges(size_t entity_index) const { return in_[entity_index]; }
  // Distinct undirected neighbours, sorted by entity index.
  const std::vector<size_t>& Neighbours(size_t entity_index) const {
    return undirected_[entity_index];
  }
  bool HasEdge(const std::string& head, const std::string& tail) const;
  // Entities present in this view (pruned entities are absent from a
  // shattered view).
  bool InView(size_t entity_index) const;
  size_t NodeCount() const;

  void SetMetadata(GraphView view, KThreshold k, std::string stoplist_id, CountingUnit unit);

  // Checks ids, head != tail, and that the shattered view has no edge on a
  // pruned entity.
  void Validate() const;

 private:
  void Reindex();

  std::vector<Entity> entities_;
  std::vector<Triplet> edges_;
  std::map<std::string, size_t> index_;
  std::map<std::string, size_t> name_index_;
  std::vector<std::vector<size_t>> out_;
  std::vector<std::vector<size_t>> in_;
  std::vector<std::vector<size_t>> undirected_;
  GraphView view_ = GraphView::kOriginal;
  KThreshold k_threshold_;
  std::string stoplist_id_;
  CountingUnit counting_unit_ = CountingUnit::kTreeNodes;
};

// graph.jsonl: header meta carries view, k, stoplist and counting unit; then
// {"type":"entity",...} records followed by {"type":"edge",...} records.
inline constexpr char kGraphSchema[] = "kgbench.graph";
inline constexpr int kGraphSchemaVersion = 1;
void WriteGraph(const KnowledgeGraph& graph, const std::filesystem::path& path,
                nlohmann::json extra_meta = nlohmann::json::object());
KnowledgeGraph ReadGraph(const std::filesystem::path& path);

// Normalized stop terms; one per line, '#' comments, blank lines ignored.
struct Stoplist {
  std::set<std::string> terms;
  std::string id;  // "<file name>@<sha256 prefix>" or "empty"

  bool Matches(const Entity& entity) const;
};
Stoplist ParseStoplist(const std::string& content, const std::string& name);
Stoplist LoadStoplist(const std::filesystem::path& path);

// Counts per entity id. kTreeNodes counts distinct source nodes.
std::map<std::string, long> EntityFrequencies(const std::vector<Triplet>& triplets,
                                              CountingUnit unit,
                                              const std::set<std::string>& known_entities);

// Copy of `graph` with pruned entities marked (frequency > k or stoplist
// match) and every edge touching them removed.
KnowledgeGraph Shatter(const KnowledgeGraph& graph, const KThreshold& k, const Stoplist& stoplist);

// Undirected BFS hop count inside the view; nullopt when unreachable.
std::optional<int> ShortestPathHops(const KnowledgeGraph& graph, const std::string& u,
                                    const std::string& v);
// Hop counts from one entity index to every entity index (-1 unreachable).
std::vector<int> HopsFrom(const KnowledgeGraph& graph, size_t source);

struct TopologyReport {
  long node_count = 0;
  long edge_count = 0;
  long largest_component_size = 0;
  long component_count = 0;
  double average_shortest_path = 0.0;
  std::string path_basis;
};

void to_json(nlohmann::json& j, const TopologyReport& r);

// Throws kValidation on a graph with no nodes in view.
TopologyReport ComputeTopology(const KnowledgeGraph& graph);

struct SweepPoint {
  KThreshold k;
  long pruned_entities = 0;
  TopologyReport topology;
};

std::vector<SweepPoint> ShatterSweep(const KnowledgeGraph& original,
                                     const std::vector<KThreshold>& ks, const Stoplist& stoplist);
nlohmann::json SweepJson(const std::vector<SweepPoint>& sweep);

}  // namespace kgbench

#endif  // KGBENCH_KG_GRAPH_H_
