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

#include "kgbench/kg/graph_builder.h"

#include <cstdio>

#include "kgbench/util/error.h"

namespace kgbench {
namespace {

std::string EntityId(size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "E%05zu", index);
  return buf;
}

class Resolver {
 public:
  Resolver(const GraphBuildOptions& options, GraphBuildReport& report)
      : options_(options), report_(report), vocab_(options.token_mode) {}

  std::string Resolve(const std::string& surface) {
    const std::string trimmed = NormalizeWhitespace(surface);
    for (const auto& m : vocab_.AlignMaxMatch(trimmed)) {
      if (m.char_begin == 0 && m.char_end == CodePointCount(trimmed)) {
        ++report_.exact_matches;
        AddAlias(m.entity_id, trimmed);
        return m.entity_id;
      }
    }
    if (auto merged = FuzzyMerge(trimmed, candidates_, options_.theta)) {
      ++report_.fuzzy_merges;
      const size_t i = by_id_.at(merged->entity_id);
      report_.merges.push_back({{"surface", trimmed},
                                {"entity_id", merged->entity_id},
                                {"canonical_name", entities_[i].canonical_name},
                                {"distance", merged->distance}});
      AddAlias(merged->entity_id, trimmed);
      return merged->entity_id;
    }
    const std::string id = EntityId(entities_.size());
    Entity e;
    e.entity_id = id;
    e.canonical_name = trimmed;
    by_id_[id] = entities_.size();
    entities_.push_back(e);
    candidates_.push_back({id, trimmed, {trimmed}, 0});
    vocab_.Add(trimmed, id);
    return id;
  }

  void CountUse(const std::string& id) { ++candidates_[by_id_.at(id)].frequency; }

  std::vector<Entity> TakeEntities() { return std::move(entities_); }

 private:
  static std::string NormalizeWhitespace(const std::string& s) {
    std::string out;
    bool space = false;
    for (char c : s) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        space = !out.empty();
        continue;
      }
      if (space) out += ' ';
      space = false;
      out += c;
    }
    return out;
  }

  void AddAlias(const std::string& id, const std::string& surface) {
    const size_t i = by_id_.at(id);
    Entity& e = entities_[i];
    const std::string norm = NormalizeForMatch(surface);
    if (norm == NormalizeForMatch(e.canonical_name)) return;
    for (const auto& a : e.aliases) {
      if (NormalizeForMatch(a) == norm) return;
    }
    e.aliases.insert(surface);
    candidates_[i].surfaces.push_back(surface);
    vocab_.Add(surface, id);
  }

  const GraphBuildOptions& options_;
  GraphBuildReport& report_;
  MentionVocabulary vocab_;
  std::vector<Entity> entities_;
  std::vector<MergeCandidate> candidates_;
  std::map<std::string, size_t> by_id_;
};

}  // namespace

nlohmann::json BuildReportJson(const GraphBuildReport& r) {
  return {{"raw_triplets", r.raw_triplets},
          {"edges", r.edges},
          {"entities", r.entities},
          {"exact_matches", r.exact_matches},
          {"fuzzy_merges", r.fuzzy_merges},
          {"dropped_self_loops", r.dropped_self_loops},
          {"merges", r.merges},
          {"frequencies", {{"tree_nodes", r.frequencies_tree_nodes},
                           {"mentions", r.frequencies_mentions}}}};
}

KnowledgeGraph BuildGraph(const std::vector<RawTriplet>& raw, const GraphBuildOptions& options,
                          GraphBuildReport* report) {
  options.theta.Validate();
  GraphBuildReport local;
  GraphBuildReport& r = report ? *report : local;
  r = GraphBuildReport{};
  r.raw_triplets = static_cast<long>(raw.size());
  Resolver resolver(options, r);
  std::vector<Triplet> edges;
  for (const auto& t : raw) {
    const std::string head = resolver.Resolve(t.head);
    const std::string tail = resolver.Resolve(t.tail);
    if (head == tail) {
      ++r.dropped_self_loops;
      continue;
    }
    resolver.CountUse(head);
    resolver.CountUse(tail);
    edges.push_back({head, t.relation, tail, t.evidence, t.confidence, t.source_node});
  }
  std::vector<Entity> entities = resolver.TakeEntities();
  std::set<std::string> used;
  for (const auto& e : edges) used.insert({e.head, e.tail});
  std::erase_if(entities, [&](const Entity& e) { return !used.contains(e.entity_id); });
  std::set<std::string> ids;
  for (const auto& e : entities) ids.insert(e.entity_id);
  r.frequencies_tree_nodes = EntityFrequencies(edges, CountingUnit::kTreeNodes, ids);
  r.frequencies_mentions = EntityFrequencies(edges, CountingUnit::kMentions, ids);
  const auto& chosen = options.counting_unit == CountingUnit::kTreeNodes
                           ? r.frequencies_tree_nodes
                           : r.frequencies_mentions;
  for (auto& e : entities) {
    auto it = chosen.find(e.entity_id);
    e.frequency = it == chosen.end() ? 0 : it->second;
  }
  r.edges = static_cast<long>(edges.size());
  r.entities = static_cast<long>(entities.size());
  KnowledgeGraph g(std::move(entities), std::move(edges));
  g.SetMetadata(GraphView::kOriginal, std::nullopt, "", options.counting_unit);
  g.Validate();
  return g;
}

}  // namespace kgbench
