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


#ifndef KGBENCH_SYNTHESIS_CHAINS_H_
#define KGBENCH_SYNTHESIS_CHAINS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgbench/kg/graph.h"

namespace kgbench {

struct ReasoningChain {
  std::string chain_id;  // "A>e_bridge>B"
  std::string a;
  std::string e_bridge;
  std::string b;
  std::string relation_hop1;  // A -> e_bridge
  std::string relation_hop2;  // e_bridge -> B
  Evidence evidence_hop1;
  Evidence evidence_hop2;
  // Filled by SampleHardNegative.
  std::string e_sib;
  std::string b_prime;
  std::string relation_sibling;       // A -> e_sib
  std::string relation_sibling_hop2;  // e_sib -> B'
  Evidence evidence_sibling;          // grounds e_sib -> B'

  bool has_hard_negative() const { return !e_sib.empty(); }
};

void to_json(nlohmann::json& j, const ReasoningChain& c);
void from_json(const nlohmann::json& j, ReasoningChain& c);

std::string ChainId(const std::string& a, const std::string& e_bridge, const std::string& b);

struct MineLimits {
  long max_chains_per_source = 0;  // 0 means unlimited
  long max_chains = 0;             // 0 means unlimited
};

// Directed 2-hop paths A -> e -> B with A != B over edges present in the
// graph, sorted by (A, e, B). When several parallel edges exist the one
// stored first supplies the relation and evidence.
std::vector<ReasoningChain> MineChains(const KnowledgeGraph& graph, const MineLimits& limits = {});

// Completes the sibling branch A -> e_sib -> B'. Throws kNoHardNegative when
// no sibling qualifies.
ReasoningChain SampleHardNegative(const ReasoningChain& chain, const KnowledgeGraph& graph,
                                  uint64_t seed);

// Empty when the chain is consistent with the graph; otherwise the list of
// broken conditions.
std::vector<std::string> CheckChainTopology(const ReasoningChain& chain,
                                            const KnowledgeGraph& graph);

}  // namespace kgbench

#endif  // KGBENCH_SYNTHESIS_CHAINS_H_
