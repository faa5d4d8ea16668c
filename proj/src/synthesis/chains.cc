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


#include "kgbench/synthesis/chains.h"

#include <algorithm>
#include <map>
#include <set>

#include "kgbench/util/error.h"
#include "kgbench/util/rng.h"

namespace kgbench {

void to_json(nlohmann::json& j, const ReasoningChain& c) {
  j = {{"chain_id", c.chain_id},
       {"A", c.a},
       {"e_bridge", c.e_bridge},
       {"B", c.b},
       {"relations", {c.relation_hop1, c.relation_hop2}},
       {"evidence_hop1", c.evidence_hop1},
       {"evidence_hop2", c.evidence_hop2}};
  if (c.has_hard_negative()) {
    j["e_sib"] = c.e_sib;
    j["B_prime"] = c.b_prime;
    j["sibling_relations"] = {c.relation_sibling, c.relation_sibling_hop2};
    j["evidence_sibling"] = c.evidence_sibling;
  }
}

void from_json(const nlohmann::json& j, ReasoningChain& c) {
  c.chain_id = j.at("chain_id").get<std::string>();
  c.a = j.at("A").get<std::string>();
  c.e_bridge = j.at("e_bridge").get<std::string>();
  c.b = j.at("B").get<std::string>();
  c.relation_hop1 = j.at("relations").at(0).get<std::string>();
  c.relation_hop2 = j.at("relations").at(1).get<std::string>();
  c.evidence_hop1 = j.at("evidence_hop1").get<Evidence>();
  c.evidence_hop2 = j.at("evidence_hop2").get<Evidence>();
  if (j.contains("e_sib")) {
    c.e_sib = j.at("e_sib").get<std::string>();
    c.b_prime = j.at("B_prime").get<std::string>();
    c.relation_sibling = j.at("sibling_relations").at(0).get<std::string>();
    c.relation_sibling_hop2 = j.at("sibling_relations").at(1).get<std::string>();
    c.evidence_sibling = j.at("evidence_sibling").get<Evidence>();
  }
}

std::string ChainId(const std::string& a, const std::string& e_bridge, const std::string& b) {
  return a + ">" + e_bridge + ">" + b;
}

namespace {

// First stored edge per (head, tail), keyed by entity ids.
std::map<std::pair<std::string, std::string>, size_t> FirstEdges(const KnowledgeGraph& graph) {
  std::map<std::pair<std::string, std::string>, size_t> first;
  const auto& edges = graph.edges();
  for (size_t i = 0; i < edges.size(); ++i) first.emplace(std::pair{edges[i].head, edges[i].tail}, i);
  return first;
}

// Distinct out-neighbour ids of an entity, sorted.
std::vector<std::string> Successors(const KnowledgeGraph& graph, const std::string& id) {
  std::set<std::string> out;
  for (size_t e : graph.OutEdges(graph.IndexOf(id))) out.insert(graph.edges()[e].tail);
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<ReasoningChain> MineChains(const KnowledgeGraph& graph, const MineLimits& limits) {
  Require(limits.max_chains_per_source >= 0 && limits.max_chains >= 0,
          "chain limits must be non-negative");
  const auto first = FirstEdges(graph);
  const auto& edges = graph.edges();
  std::vector<std::string> sources;
  for (const auto& e : graph.entities()) sources.push_back(e.entity_id);
  std::sort(sources.begin(), sources.end());

  std::vector<ReasoningChain> chains;
  for (const auto& a : sources) {
    if (!graph.InView(graph.IndexOf(a))) continue;
    long from_source = 0;
    for (const auto& e : Successors(graph, a)) {
      for (const auto& b : Successors(graph, e)) {
        if (b == a) continue;
        if (limits.max_chains_per_source > 0 && from_source >= limits.max_chains_per_source) break;
        const Triplet& hop1 = edges[first.at({a, e})];
        const Triplet& hop2 = edges[first.at({e, b})];
        ReasoningChain c;
        c.chain_id = ChainId(a, e, b);
        c.a = a;
        c.e_bridge = e;
        c.b = b;
        c.relation_hop1 = hop1.relation;
        c.relation_hop2 = hop2.relation;
        c.evidence_hop1 = hop1.evidence;
        c.evidence_hop2 = hop2.evidence;
        chains.push_back(std::move(c));
        ++from_source;
        if (limits.max_chains > 0 && static_cast<long>(chains.size()) >= limits.max_chains) {
          return chains;
        }
      }
    }
  }
  return chains;
}

ReasoningChain SampleHardNegative(const ReasoningChain& chain, const KnowledgeGraph& graph,
                                  uint64_t seed) {
  Require(graph.FindEntity(chain.a) && graph.FindEntity(chain.e_bridge) &&
              graph.FindEntity(chain.b),
          "chain " + chain.chain_id + " references unknown entities");
  const std::set<std::string> excluded = {chain.a, chain.e_bridge, chain.b};
  std::vector<std::pair<std::string, std::vector<std::string>>> candidates;
  for (const auto& sib : Successors(graph, chain.a)) {
    if (sib == chain.e_bridge) continue;
    std::vector<std::string> targets;
    for (const auto& t : Successors(graph, sib)) {
      if (!excluded.count(t)) targets.push_back(t);
    }
    if (!targets.empty()) candidates.emplace_back(sib, std::move(targets));
  }
  if (candidates.empty()) {
    Fail(ErrorKind::kNoHardNegative,
         "chain " + chain.chain_id + ": no sibling branch from " + chain.a);
  }
  Rng rng(seed);
  const auto& [sib, targets] = candidates[rng.Uniform(candidates.size())];
  const std::string& b_prime = targets[rng.Uniform(targets.size())];

  const auto first = FirstEdges(graph);
  const Triplet& to_sib = graph.edges()[first.at({chain.a, sib})];
  const Triplet& to_target = graph.edges()[first.at({sib, b_prime})];
  ReasoningChain out = chain;
  out.e_sib = sib;
  out.b_prime = b_prime;
  out.relation_sibling = to_sib.relation;
  out.relation_sibling_hop2 = to_target.relation;
  out.evidence_sibling = to_target.evidence;
  return out;
}

std::vector<std::string> CheckChainTopology(const ReasoningChain& chain,
                                            const KnowledgeGraph& graph) {
  std::vector<std::string> problems;
  auto need_edge = [&](const std::string& h, const std::string& t) {
    if (!graph.HasEdge(h, t)) problems.push_back("missing edge " + h + "->" + t);
  };
  need_edge(chain.a, chain.e_bridge);
  need_edge(chain.e_bridge, chain.b);
  if (chain.a == chain.b) problems.push_back("A equals B");
  if (!chain.has_hard_negative()) {
    problems.push_back("no hard negative");
    return problems;
  }
  need_edge(chain.a, chain.e_sib);
  need_edge(chain.e_sib, chain.b_prime);
  if (chain.e_sib == chain.e_bridge) problems.push_back("e_sib equals e_bridge");
  if (chain.b_prime == chain.a || chain.b_prime == chain.e_bridge || chain.b_prime == chain.b) {
    problems.push_back("B' collides with the main chain");
  }
  return problems;
}

}  // namespace kgbench
