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

#include "kgbench/kg/graph.h"

#include <algorithm>
#include <deque>
#include <sstream>

#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/files.h"
#include "kgbench/util/text.h"

namespace kgbench {

const char* PruneReasonName(PruneReason reason) {
  switch (reason) {
    case PruneReason::kNone: return "none";
    case PruneReason::kOverK: return "over_k";
    case PruneReason::kStoplist: return "stoplist";
  }
  return "none";
}

const char* GraphViewName(GraphView view) {
  return view == GraphView::kOriginal ? "original" : "shattered";
}

const char* CountingUnitName(CountingUnit unit) {
  return unit == CountingUnit::kTreeNodes ? "tree_nodes" : "mentions";
}

CountingUnit ParseCountingUnit(const std::string& name) {
  if (name == "tree_nodes") return CountingUnit::kTreeNodes;
  if (name == "mentions") return CountingUnit::kMentions;
  Fail(ErrorKind::kValidation, "unknown counting unit '" + name + "'");
}

namespace {

PruneReason ParsePruneReason(const std::string& s) {
  if (s == "none") return PruneReason::kNone;
  if (s == "over_k") return PruneReason::kOverK;
  if (s == "stoplist") return PruneReason::kStoplist;
  Fail(ErrorKind::kParse, "unknown prune_reason '" + s + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const Entity& e) {
  j = {{"entity_id", e.entity_id},
       {"canonical_name", e.canonical_name},
       {"aliases", e.aliases},
       {"frequency", e.frequency},
       {"is_pruned", e.is_pruned},
       {"prune_reason", PruneReasonName(e.prune_reason)}};
}

void from_json(const nlohmann::json& j, Entity& e) {
  e.entity_id = j.at("entity_id").get<std::string>();
  e.canonical_name = j.at("canonical_name").get<std::string>();
  e.aliases = j.value("aliases", std::set<std::string>());
  e.frequency = j.value("frequency", 0L);
  e.is_pruned = j.value("is_pruned", false);
  e.prune_reason = ParsePruneReason(j.value("prune_reason", std::string("none")));
}

void to_json(nlohmann::json& j, const Evidence& e) {
  j = {{"chunk_id", e.chunk_id},
       {"sentence_span", {e.sentence_start, e.sentence_end}},
       {"page_anchor", e.page_anchor}};
}

void from_json(const nlohmann::json& j, Evidence& e) {
  e.chunk_id = j.at("chunk_id").get<std::string>();
  const auto& span = j.at("sentence_span");
  e.sentence_start = span.at(0).get<int>();
  e.sentence_end = span.at(1).get<int>();
  e.page_anchor = j.value("page_anchor", 1);
}

void to_json(nlohmann::json& j, const Triplet& t) {
  j = {{"head", t.head},         {"relation", t.relation},     {"tail", t.tail},
       {"evidence", t.evidence}, {"confidence", t.confidence}, {"source_node", t.source_node}};
}

void from_json(const nlohmann::json& j, Triplet& t) {
  t.head = j.at("head").get<std::string>();
  t.relation = j.at("relation").get<std::string>();
  t.tail = j.at("tail").get<std::string>();
  t.evidence = j.at("evidence").get<Evidence>();
  t.confidence = j.value("confidence", 1.0);
  t.source_node = j.value("source_node", std::string());
}

std::string FormatK(const KThreshold& k) { return k ? std::to_string(*k) : "inf"; }

KThreshold ParseK(const std::string& text) {
  const std::string t = NormalizeForMatch(text);
  if (t == "inf" || t == "infinity" || t == "∞") return std::nullopt;
  long v = 0;
  try {
    size_t used = 0;
    v = std::stol(t, &used);
    Require(used == t.size(), "bad k '" + text + "'");
  } catch (const std::logic_error&) {
    Fail(ErrorKind::kValidation, "bad k '" + text + "'");
  }
  Require(v >= 1, "k must be a positive integer or inf");
  return v;
}

KnowledgeGraph::KnowledgeGraph(std::vector<Entity> entities, std::vector<Triplet> edges)
    : entities_(std::move(entities)), edges_(std::move(edges)) {
  Reindex();
}

void KnowledgeGraph::Reindex() {
  index_.clear();
  name_index_.clear();
  for (size_t i = 0; i < entities_.size(); ++i) {
    Require(index_.emplace(entities_[i].entity_id, i).second,
            "duplicate entity id " + entities_[i].entity_id);
    name_index_.emplace(NormalizeForMatch(entities_[i].canonical_name), i);
  }
  for (size_t i = 0; i < entities_.size(); ++i) {
    for (const auto& a : entities_[i].aliases) name_index_.emplace(NormalizeForMatch(a), i);
  }
  out_.assign(entities_.size(), {});
  in_.assign(entities_.size(), {});
  undirected_.assign(entities_.size(), {});
  for (size_t e = 0; e < edges_.size(); ++e) {
    const size_t h = IndexOf(edges_[e].head);
    const size_t t = IndexOf(edges_[e].tail);
    out_[h].push_back(e);
    in_[t].push_back(e);
    if (h != t) {
      undirected_[h].push_back(t);
      undirected_[t].push_back(h);
    }
  }
  for (auto& n : undirected_) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
}

const Entity* KnowledgeGraph::FindEntity(const std::string& entity_id) const {
  auto it = index_.find(entity_id);
  return it == index_.end() ? nullptr : &entities_[it->second];
}

const Entity* KnowledgeGraph::FindByName(const std::string& name) const {
  auto it = name_index_.find(NormalizeForMatch(name));
  return it == name_index_.end() ? nullptr : &entities_[it->second];
}

size_t KnowledgeGraph::IndexOf(const std::string& entity_id) const {
  auto it = index_.find(entity_id);
  if (it == index_.end()) Fail(ErrorKind::kValidation, "unknown entity id " + entity_id);
  return it->second;
}

bool KnowledgeGraph::HasEdge(const std::string& head, const std::string& tail) const {
  auto h = index_.find(head);
  if (h == index_.end()) return false;
  for (size_t e : out_[h->second]) {
    if (edges_[e].tail == tail) return true;
  }
  return false;
}

bool KnowledgeGraph::InView(size_t entity_index) const {
  return view_ == GraphView::kOriginal || !entities_[entity_index].is_pruned;
}

size_t KnowledgeGraph::NodeCount() const {
  size_t n = 0;
  for (size_t i = 0; i < entities_.size(); ++i) n += InView(i) ? 1 : 0;
  return n;
}

void KnowledgeGraph::SetMetadata(GraphView view, KThreshold k, std::string stoplist_id,
                                 CountingUnit unit) {
  view_ = view;
  k_threshold_ = k;
  stoplist_id_ = std::move(stoplist_id);
  counting_unit_ = unit;
}

void KnowledgeGraph::Validate() const {
  for (const auto& e : entities_) {
    Require(!e.aliases.contains(e.canonical_name),
            "entity " + e.entity_id + " lists its canonical name as an alias");
    Require(e.frequency >= 0, "negative frequency on " + e.entity_id);
  }
  for (const auto& t : edges_) {
    Require(t.head != t.tail, "self-loop edge on " + t.head);
    const Entity* h = FindEntity(t.head);
    const Entity* tl = FindEntity(t.tail);
    Require(h && tl, "edge references an unknown entity");
    if (view_ == GraphView::kShattered) {
      Require(!h->is_pruned && !tl->is_pruned,
              "shattered view keeps an edge on pruned entity " +
                  (h->is_pruned ? h->entity_id : tl->entity_id));
    }
  }
}

void WriteGraph(const KnowledgeGraph& graph, const std::filesystem::path& path,
                nlohmann::json extra_meta) {
  JsonlHeader header{kGraphSchema, kGraphSchemaVersion, std::move(extra_meta)};
  header.meta["view"] = GraphViewName(graph.view());
  header.meta["k_threshold"] = FormatK(graph.k_threshold());
  header.meta["stoplist_id"] = graph.stoplist_id();
  header.meta["counting_unit"] = CountingUnitName(graph.counting_unit());
  std::vector<nlohmann::json> rows;
  for (const auto& e : graph.entities()) {
    nlohmann::json j = e;
    j["type"] = "entity";
    rows.push_back(std::move(j));
  }
  for (const auto& t : graph.edges()) {
    nlohmann::json j = t;
    j["type"] = "edge";
    rows.push_back(std::move(j));
  }
  WriteJsonl(path, header, rows);
}

KnowledgeGraph ReadGraph(const std::filesystem::path& path) {
  const JsonlDocument doc = ReadJsonl(path, kGraphSchema, kGraphSchemaVersion);
  std::vector<Entity> entities;
  std::vector<Triplet> edges;
  for (const auto& row : doc.records) {
    const std::string type = row.value("type", std::string());
    if (type == "entity") {
      entities.push_back(row.get<Entity>());
    } else if (type == "edge") {
      edges.push_back(row.get<Triplet>());
    } else {
      Fail(ErrorKind::kParse, path.string() + ": record without entity/edge type");
    }
  }
  KnowledgeGraph g(std::move(entities), std::move(edges));
  const auto& meta = doc.header.meta;
  g.SetMetadata(meta.value("view", std::string("original")) == "shattered" ? GraphView::kShattered
                                                                           : GraphView::kOriginal,
                ParseK(meta.value("k_threshold", std::string("inf"))),
                meta.value("stoplist_id", std::string()),
                ParseCountingUnit(meta.value("counting_unit", std::string("tree_nodes"))));
  g.Validate();
  return g;
}

bool Stoplist::Matches(const Entity& entity) const {
  if (terms.empty()) return false;
  if (terms.contains(NormalizeForMatch(entity.canonical_name))) return true;
  for (const auto& a : entity.aliases) {
    if (terms.contains(NormalizeForMatch(a))) return true;
  }
  return false;
}

Stoplist ParseStoplist(const std::string& content, const std::string& name) {
  Stoplist out;
  std::stringstream ss(content);
  std::string line;
  while (std::getline(ss, line)) {
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string term = NormalizeForMatch(line);
    if (!term.empty()) out.terms.insert(std::move(term));
  }
  out.id = name + "@" + Sha256Hex(content).substr(0, 12);
  return out;
}

Stoplist LoadStoplist(const std::filesystem::path& path) {
  return ParseStoplist(ReadFile(path), path.filename().string());
}

std::map<std::string, long> EntityFrequencies(const std::vector<Triplet>& triplets,
                                              CountingUnit unit,
                                              const std::set<std::string>& known_entities) {
  std::map<std::string, long> mentions;
  std::map<std::string, std::set<std::string>> nodes;
  for (const auto& t : triplets) {
    for (const std::string* id : {&t.head, &t.tail}) {
      Require(known_entities.contains(*id), "triplet references unresolved entity " + *id);
      ++mentions[*id];
      nodes[*id].insert(t.source_node);
    }
  }
  if (unit == CountingUnit::kMentions) return mentions;
  std::map<std::string, long> out;
  for (const auto& [id, set] : nodes) out[id] = static_cast<long>(set.size());
  return out;
}

KnowledgeGraph Shatter(const KnowledgeGraph& graph, const KThreshold& k, const Stoplist& stoplist) {
  std::vector<Entity> entities = graph.entities();
  std::set<std::string> pruned;
  for (auto& e : entities) {
    e.is_pruned = false;
    e.prune_reason = PruneReason::kNone;
    if (stoplist.Matches(e)) {
      e.prune_reason = PruneReason::kStoplist;
    } else if (k && e.frequency > *k) {
      e.prune_reason = PruneReason::kOverK;
    }
    if (e.prune_reason != PruneReason::kNone) {
      e.is_pruned = true;
      pruned.insert(e.entity_id);
    }
  }
  std::vector<Triplet> edges;
  for (const auto& t : graph.edges()) {
    if (!pruned.contains(t.head) && !pruned.contains(t.tail)) edges.push_back(t);
  }
  KnowledgeGraph out(std::move(entities), std::move(edges));
  out.SetMetadata(GraphView::kShattered, k, stoplist.id.empty() ? "empty" : stoplist.id,
                  graph.counting_unit());
  return out;
}

std::vector<int> HopsFrom(const KnowledgeGraph& graph, size_t source) {
  std::vector<int> dist(graph.entities().size(), -1);
  if (!graph.InView(source)) return dist;
  std::deque<size_t> queue = {source};
  dist[source] = 0;
  while (!queue.empty()) {
    const size_t u = queue.front();
    queue.pop_front();
    for (size_t v : graph.Neighbours(u)) {
      if (dist[v] >= 0 || !graph.InView(v)) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

std::optional<int> ShortestPathHops(const KnowledgeGraph& graph, const std::string& u,
                                    const std::string& v) {
  const size_t a = graph.IndexOf(u);
  const size_t b = graph.IndexOf(v);
  Require(graph.InView(a), u + " is not in the " + GraphViewName(graph.view()) + " view");
  Require(graph.InView(b), v + " is not in the " + GraphViewName(graph.view()) + " view");
  const int d = HopsFrom(graph, a)[b];
  if (d < 0) return std::nullopt;
  return d;
}

void to_json(nlohmann::json& j, const TopologyReport& r) {
  j = {{"node_count", r.node_count},
       {"edge_count", r.edge_count},
       {"largest_component_size", r.largest_component_size},
       {"component_count", r.component_count},
       {"average_shortest_path", r.average_shortest_path},
       {"path_basis", r.path_basis}};
}

TopologyReport ComputeTopology(const KnowledgeGraph& graph) {
  const size_t n = graph.entities().size();
  TopologyReport r;
  r.node_count = static_cast<long>(graph.NodeCount());
  Require(r.node_count > 0, "topology of an empty graph");
  r.edge_count = static_cast<long>(graph.edges().size());
  std::vector<long> component(n, -1);
  std::vector<std::vector<size_t>> members;
  for (size_t i = 0; i < n; ++i) {
    if (!graph.InView(i) || component[i] >= 0) continue;
    const std::vector<int> d = HopsFrom(graph, i);
    members.emplace_back();
    for (size_t j = 0; j < n; ++j) {
      if (d[j] >= 0) {
        component[j] = static_cast<long>(members.size() - 1);
        members.back().push_back(j);
      }
    }
  }
  r.component_count = static_cast<long>(members.size());
  size_t largest = 0;
  for (size_t c = 1; c < members.size(); ++c) {
    if (members[c].size() > members[largest].size()) largest = c;
  }
  const std::vector<size_t>& lc = members[largest];
  r.largest_component_size = static_cast<long>(lc.size());
  double total = 0.0;
  for (size_t u : lc) {
    const std::vector<int> d = HopsFrom(graph, u);
    for (size_t v : lc) total += d[v];
  }
  const double pairs = static_cast<double>(lc.size()) * static_cast<double>(lc.size() - 1);
  r.average_shortest_path = pairs > 0 ? total / pairs : 0.0;
  r.path_basis = "ordered pairs of distinct nodes in the largest undirected component (" +
                 std::to_string(lc.size()) + " nodes, " +
                 std::to_string(static_cast<long>(pairs)) + " pairs)";
  return r;
}

std::vector<SweepPoint> ShatterSweep(const KnowledgeGraph& original,
                                     const std::vector<KThreshold>& ks, const Stoplist& stoplist) {
  std::vector<SweepPoint> out;
  for (const auto& k : ks) {
    const KnowledgeGraph g = Shatter(original, k, stoplist);
    SweepPoint p;
    p.k = k;
    for (const auto& e : g.entities()) p.pruned_entities += e.is_pruned ? 1 : 0;
    if (g.NodeCount() > 0) p.topology = ComputeTopology(g);
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json SweepJson(const std::vector<SweepPoint>& sweep) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : sweep) {
    out.push_back({{"k", FormatK(p.k)}, {"pruned_entities", p.pruned_entities},
                   {"topology", p.topology}});
  }
  return out;
}

}  // namespace kgbench
