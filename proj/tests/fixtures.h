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


#ifndef KGBENCH_TESTS_FIXTURES_H_
#define KGBENCH_TESTS_FIXTURES_H_

#include <atomic>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kgbench/corpus/corpus.h"
#include "kgbench/kg/graph.h"
#include "kgbench/providers/chat.h"
#include "kgbench/providers/mock.h"
#include "kgbench/util/rng.h"

namespace kgbench::testing {

// A graph whose every edge is stated by its own one-sentence chunk in a
// single document, so evidence anchors always resolve.
struct World {
  CorpusStore corpus;
  KnowledgeGraph graph;
};

inline World MakeWorld(const std::vector<std::string>& names,
                       const std::vector<std::pair<int, int>>& links,
                       const std::string& doc_id = "world") {
  std::vector<Entity> entities;
  for (size_t i = 0; i < names.size(); ++i) {
    Entity e;
    e.entity_id = "N" + std::to_string(1000 + i);
    e.canonical_name = names[i];
    entities.push_back(e);
  }
  Document doc;
  doc.doc_id = doc_id;
  std::vector<Sentence> sentences;
  std::vector<Chunk> chunks;
  std::vector<Triplet> edges;
  std::string page;
  for (size_t i = 0; i < links.size(); ++i) {
    const auto [h, t] = links[i];
    const int index = static_cast<int>(i);
    const std::string text = names[h] + " leads to " + names[t] + ".";
    sentences.push_back({doc_id, 1, index, text});
    Chunk c;
    c.chunk_id = doc_id + "#c" + std::to_string(i);
    c.doc_id = doc_id;
    c.sentence_start = c.sentence_end = index;
    c.text = text;
    chunks.push_back(c);
    Triplet tr;
    tr.head = entities[h].entity_id;
    tr.tail = entities[t].entity_id;
    tr.relation = "leads to";
    tr.evidence = {c.chunk_id, index, index, 1};
    tr.source_node = c.chunk_id;
    edges.push_back(tr);
    ++entities[h].frequency;
    ++entities[t].frequency;
    page += (page.empty() ? "" : " ") + text;
  }
  doc.pages = {{1, page}};
  World w;
  w.corpus = CorpusStore({doc}, sentences, chunks);
  w.graph = KnowledgeGraph(std::move(entities), std::move(edges));
  return w;
}

// Pronounceable pseudo-word names; distinct and unlikely to contain one
// another.
inline std::vector<std::string> PseudoNames(size_t n, uint64_t seed) {
  static const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u"};
  Rng rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string word;
    for (int part = 0; part < 2; ++part) {
      if (part) word += ' ';
      for (int s = 0; s < 3; ++s) {
        std::string syl = std::string(kOnsets[rng.Uniform(14)]) + kVowels[rng.Uniform(5)];
        if (s == 0 && part == 0) syl[0] = static_cast<char>(syl[0] - 'a' + 'A');
        word += syl;
      }
      word += kOnsets[rng.Uniform(14)];
    }
    if (seen.insert(word).second) out.push_back(word);
  }
  return out;
}

// Disjoint random directed clusters; unreachable entities make filler
// options plentiful.
inline World ClusteredWorld(uint64_t seed, int clusters, int nodes_per_cluster,
                            int edges_per_cluster) {
  Rng rng(seed);
  const auto names = PseudoNames(static_cast<size_t>(clusters * nodes_per_cluster), seed ^ 0x5eed);
  std::vector<std::pair<int, int>> links;
  for (int c = 0; c < clusters; ++c) {
    std::set<std::pair<int, int>> used;
    const int base = c * nodes_per_cluster;
    while (static_cast<int>(used.size()) < edges_per_cluster) {
      const int h = base + static_cast<int>(rng.Uniform(nodes_per_cluster));
      const int t = base + static_cast<int>(rng.Uniform(nodes_per_cluster));
      if (h == t || !used.insert({h, t}).second) continue;
      links.emplace_back(h, t);
    }
  }
  return MakeWorld(names, links);
}

inline std::shared_ptr<ChatProvider> MockChat(double leak_rate = 0.0,
                                              const std::string& member = "mock") {
  MockChatOptions options;
  options.leak_rate = leak_rate;
  options.member_name = member;
  return std::make_shared<MockChatProvider>(options);
}

// Wraps a provider and counts calls.
class CountingChat : public ChatProvider {
 public:
  explicit CountingChat(std::shared_ptr<ChatProvider> inner) : inner_(std::move(inner)) {}
  std::string id() const override { return inner_->id(); }
  std::string Complete(const ChatRequest& request) override {
    ++calls;
    return inner_->Complete(request);
  }
  std::atomic<int> calls{0};

 private:
  std::shared_ptr<ChatProvider> inner_;
};

}  // namespace kgbench::testing

#endif  // KGBENCH_TESTS_FIXTURES_H_
