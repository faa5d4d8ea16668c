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

#include "kgbench/corpus/corpus.h"

#include <unicode/uchar.h>

#include <sstream>

#include "kgbench/util/error.h"
#include "kgbench/util/files.h"

namespace kgbench {
namespace {

bool IsLetter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool IsClosing(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case U'”': case U'’': case U'）': case U'」':
    case U'』': case U'】':
      return true;
    default:
      return false;
  }
}

bool IsCjkStop(char32_t c) { return c == U'。' || c == U'！' || c == U'？'; }
bool IsAsciiStop(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

}  // namespace

void to_json(nlohmann::json& j, const Page& p) {
  j = {{"page_number", p.page_number}, {"text", p.text}};
}
void from_json(const nlohmann::json& j, Page& p) {
  j.at("page_number").get_to(p.page_number);
  j.at("text").get_to(p.text);
}

void to_json(nlohmann::json& j, const Document& d) {
  j = {{"doc_id", d.doc_id},
       {"language", LanguageTag(d.language)},
       {"pages", d.pages},
       {"source_path", d.source_path}};
}
void from_json(const nlohmann::json& j, Document& d) {
  j.at("doc_id").get_to(d.doc_id);
  d.language = ParseLanguage(j.at("language").get<std::string>());
  j.at("pages").get_to(d.pages);
  j.at("source_path").get_to(d.source_path);
}

void to_json(nlohmann::json& j, const Sentence& s) {
  j = {{"doc_id", s.doc_id},
       {"page_number", s.page_number},
       {"sentence_index", s.sentence_index},
       {"text", s.text}};
}
void from_json(const nlohmann::json& j, Sentence& s) {
  j.at("doc_id").get_to(s.doc_id);
  j.at("page_number").get_to(s.page_number);
  j.at("sentence_index").get_to(s.sentence_index);
  j.at("text").get_to(s.text);
}

void to_json(nlohmann::json& j, const Chunk& c) {
  j = {{"chunk_id", c.chunk_id},
       {"doc_id", c.doc_id},
       {"sentence_span", {c.sentence_start, c.sentence_end}},
       {"text", c.text},
       {"page_anchor", c.page_anchor},
       {"embedding", c.embedding}};
}
void from_json(const nlohmann::json& j, Chunk& c) {
  j.at("chunk_id").get_to(c.chunk_id);
  j.at("doc_id").get_to(c.doc_id);
  c.sentence_start = j.at("sentence_span").at(0).get<int>();
  c.sentence_end = j.at("sentence_span").at(1).get<int>();
  j.at("text").get_to(c.text);
  j.at("page_anchor").get_to(c.page_anchor);
  j.at("embedding").get_to(c.embedding);
}

std::string CleanText(std::string_view raw) {
  std::u32string in = DecodeUtf8(raw);

  // Control characters other than whitespace go first.
  std::u32string stripped;
  stripped.reserve(in.size());
  for (char32_t c : in) {
    if (IsSpace(c) || !u_iscntrl(static_cast<UChar32>(c))) stripped.push_back(c);
  }

  // Letter '-' [spaces] newline [spaces] letter  ->  letter letter.
  std::u32string joined;
  joined.reserve(stripped.size());
  for (size_t i = 0; i < stripped.size(); ++i) {
    const char32_t c = stripped[i];
    if (c == U'-' && !joined.empty() && IsLetter(joined.back())) {
      size_t j = i + 1;
      while (j < stripped.size() && (stripped[j] == U' ' || stripped[j] == U'\t')) ++j;
      if (j < stripped.size() && stripped[j] == U'\r') ++j;
      if (j < stripped.size() && stripped[j] == U'\n') {
        ++j;
        while (j < stripped.size() && (stripped[j] == U' ' || stripped[j] == U'\t')) ++j;
        if (j < stripped.size() && IsLetter(stripped[j])) {
          i = j - 1;
          continue;
        }
      }
    }
    joined.push_back(c);
  }

  std::u32string out;
  out.reserve(joined.size());
  bool pending_space = false;
  for (char32_t c : joined) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return EncodeUtf8(out);
}

std::string_view SentenceJoiner(Language language) {
  return language == Language::kZh ? std::string_view() : std::string_view(" ");
}

std::vector<Sentence> SplitSentences(const Document& doc) {
  std::vector<Sentence> out;
  int index = 0;
  auto emit = [&](const std::u32string& text, int page) {
    std::string cleaned = CleanText(EncodeUtf8(text));
    if (cleaned.empty()) return;
    out.push_back({doc.doc_id, page, index++, std::move(cleaned)});
  };
  for (const Page& page : doc.pages) {
    const std::u32string cps = DecodeUtf8(page.text);
    std::u32string current;
    for (size_t i = 0; i < cps.size(); ++i) {
      const char32_t c = cps[i];
      current.push_back(c);
      bool stop = false;
      if (IsCjkStop(c) && doc.language != Language::kEn) {
        stop = true;
      } else if (IsAsciiStop(c)) {
        if (doc.language == Language::kZh && c != U'.') {
          stop = true;
        } else if (doc.language != Language::kZh) {
          size_t j = i + 1;
          while (j < cps.size() && (IsAsciiStop(cps[j]) || IsClosing(cps[j]))) ++j;
          stop = j == cps.size() || IsSpace(cps[j]);
        }
      }
      if (!stop) continue;
      while (i + 1 < cps.size() &&
             (IsAsciiStop(cps[i + 1]) || IsCjkStop(cps[i + 1]) || IsClosing(cps[i + 1]))) {
        current.push_back(cps[++i]);
      }
      emit(current, page.page_number);
      current.clear();
    }
    emit(current, page.page_number);
  }
  return out;
}

Document LoadDocument(const std::filesystem::path& path, Language language) {
  const std::string content = ReadFile(path);
  Document doc;
  doc.doc_id = path.stem().string();
  doc.language = language;
  doc.source_path = path.string();
  std::vector<std::string> pages(1);
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "<page>") {
      pages.emplace_back();
      continue;
    }
    size_t start = 0;
    for (size_t ff = line.find('\f'); ff != std::string::npos; ff = line.find('\f', start)) {
      pages.back() += line.substr(start, ff - start);
      pages.emplace_back();
      start = ff + 1;
    }
    pages.back() += line.substr(start);
    pages.back() += '\n';
  }
  for (size_t i = 0; i < pages.size(); ++i) {
    doc.pages.push_back({static_cast<int>(i) + 1, CleanText(pages[i])});
  }
  return doc;
}

CorpusStore::CorpusStore(std::vector<Document> documents, std::vector<Sentence> sentences,
                         std::vector<Chunk> chunks)
    : documents_(std::move(documents)),
      sentences_(std::move(sentences)),
      chunks_(std::move(chunks)) {
  for (size_t i = 0; i < documents_.size(); ++i) {
    Require(doc_index_.emplace(documents_[i].doc_id, i).second,
            "duplicate doc_id " + documents_[i].doc_id);
  }
  for (size_t i = 0; i < chunks_.size(); ++i) {
    Require(chunk_index_.emplace(chunks_[i].chunk_id, i).second,
            "duplicate chunk_id " + chunks_[i].chunk_id);
  }
  for (size_t i = 0; i < sentences_.size(); ++i) {
    auto& list = doc_sentences_[sentences_[i].doc_id];
    Require(sentences_[i].sentence_index == static_cast<int>(list.size()),
            "sentences of " + sentences_[i].doc_id + " are not contiguous");
    list.push_back(i);
  }
}

const Document* CorpusStore::FindDocument(const std::string& doc_id) const {
  auto it = doc_index_.find(doc_id);
  return it == doc_index_.end() ? nullptr : &documents_[it->second];
}

const Chunk* CorpusStore::FindChunk(const std::string& chunk_id) const {
  auto it = chunk_index_.find(chunk_id);
  return it == chunk_index_.end() ? nullptr : &chunks_[it->second];
}

std::vector<const Sentence*> CorpusStore::DocumentSentences(const std::string& doc_id) const {
  std::vector<const Sentence*> out;
  auto it = doc_sentences_.find(doc_id);
  if (it == doc_sentences_.end()) return out;
  for (size_t i : it->second) out.push_back(&sentences_[i]);
  return out;
}

std::optional<std::string> CorpusStore::SpanText(const std::string& doc_id, int start,
                                                 int end) const {
  auto it = doc_sentences_.find(doc_id);
  if (it == doc_sentences_.end() || start < 0 || end < start ||
      end >= static_cast<int>(it->second.size())) {
    return std::nullopt;
  }
  const std::string_view joiner = SentenceJoiner(LanguageOf(doc_id));
  std::string out;
  for (int i = start; i <= end; ++i) {
    if (i > start) out += joiner;
    out += sentences_[it->second[i]].text;
  }
  return out;
}

Language CorpusStore::LanguageOf(const std::string& doc_id) const {
  const Document* doc = FindDocument(doc_id);
  return doc ? doc->language : Language::kEn;
}

}  // namespace kgbench
