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

#ifndef KGBENCH_CORPUS_CORPUS_H_
#define KGBENCH_CORPUS_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgbench/providers/embedding.h"
#include "kgbench/util/text.h"

namespace kgbench {

struct Page {
  int page_number = 1;
  std::string text;
};

struct Document {
  std::string doc_id;
  Language language = Language::kEn;
  std::vector<Page> pages;  // strictly increasing page_number
  std::string source_path;
};

struct Sentence {
  std::string doc_id;
  int page_number = 1;
  int sentence_index = 0;  // 0-based within the document
  std::string text;
};

struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  int sentence_start = 0;  // inclusive
  int sentence_end = 0;    // inclusive
  std::string text;
  int page_anchor = 1;
  EmbeddingVector embedding;
};

void to_json(nlohmann::json& j, const Page& p);
void from_json(const nlohmann::json& j, Page& p);
void to_json(nlohmann::json& j, const Document& d);
void from_json(const nlohmann::json& j, Document& d);
void to_json(nlohmann::json& j, const Sentence& s);
void from_json(const nlohmann::json& j, Sentence& s);
void to_json(nlohmann::json& j, const Chunk& c);
void from_json(const nlohmann::json& j, Chunk& c);

// Joins hyphenated line breaks ("hyper-\ntension" -> "hypertension"),
// strips control characters and collapses whitespace runs. Idempotent.
std::string CleanText(std::string_view raw);

// Sentence separator used when member sentences are concatenated.
std::string_view SentenceJoiner(Language language);

// Terminators: . ! ? for EN (followed by whitespace or end of page);
// 。！？ plus ASCII ! ? for ZH; the union for other languages. Closing quotes
// and brackets stay with their sentence. A page with no terminator yields a
// single sentence. Sentences never cross a page boundary.
std::vector<Sentence> SplitSentences(const Document& doc);

// Reads one UTF-8 file as one document. Pages are separated by form feeds or
// by a line holding only "<page>". Page text is cleaned.
Document LoadDocument(const std::filesystem::path& path, Language language);

// Per-document sentence store with chunk lookup and span resolution.
class CorpusStore {
 public:
  CorpusStore() = default;
  CorpusStore(std::vector<Document> documents, std::vector<Sentence> sentences,
              std::vector<Chunk> chunks);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::vector<Chunk>& chunks() const { return chunks_; }

  const Document* FindDocument(const std::string& doc_id) const;
  const Chunk* FindChunk(const std::string& chunk_id) const;
  // Sentences of one document in index order (empty if unknown).
  std::vector<const Sentence*> DocumentSentences(const std::string& doc_id) const;
  // Concatenated text of an inclusive span, or nullopt when unresolvable.
  std::optional<std::string> SpanText(const std::string& doc_id, int start,
                                      int end) const;
  Language LanguageOf(const std::string& doc_id) const;

 private:
  std::vector<Document> documents_;
  std::vector<Sentence> sentences_;
  std::vector<Chunk> chunks_;
  std::map<std::string, size_t> doc_index_;
  std::map<std::string, size_t> chunk_index_;
  std::map<std::string, std::vector<size_t>> doc_sentences_;
};

}  // namespace kgbench

#endif  // KGBENCH_CORPUS_CORPUS_H_
