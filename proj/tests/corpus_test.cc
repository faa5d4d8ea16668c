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

#include <gtest/gtest.h>

#include <fstream>

#include "kgbench/corpus/chunker.h"
#include "kgbench/corpus/corpus.h"
#include "kgbench/providers/mock.h"
#include "kgbench/util/error.h"
#include "kgbench/util/rng.h"
#include "test_support.h"

namespace kgbench {
namespace {

Document MakeDoc(const std::string& text, Language lang = Language::kEn) {
  Document d;
  d.doc_id = "doc";
  d.language = lang;
  d.pages = {{1, text}};
  return d;
}

std::vector<std::string> Texts(const std::vector<Sentence>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(x.text);
  return out;
}

// Unit vectors in the plane whose consecutive cosine distances are exactly
// the requested values: each step rotates by acos(1 - d).
std::vector<EmbeddingVector> VectorsWithDistances(const std::vector<double>& distances) {
  std::vector<EmbeddingVector> out;
  double angle = 0.0;
  out.push_back({{1.0, 0.0}, 2, ""});
  for (double d : distances) {
    angle += std::acos(1.0 - d);
    out.push_back({{std::cos(angle), std::sin(angle)}, 2, ""});
  }
  return out;
}

std::vector<Sentence> NumberedSentences(size_t n) {
  std::vector<Sentence> out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back({"doc", 1, static_cast<int>(i), "S" + std::to_string(i + 1) + "."});
  }
  return out;
}

TEST(CleanTextTest, JoinsHyphenatedLineBreaks) {
  EXPECT_EQ(CleanText("hyper-\ntension"), "hypertension");
  EXPECT_EQ(CleanText("hyper- \r\n  tension"), "hypertension");
  EXPECT_EQ(CleanText("type-2\ndiabetes"), "type-2 diabetes");
  EXPECT_EQ(CleanText("well-known"), "well-known");
}

TEST(CleanTextTest, NormalizesWhitespaceAndControls) {
  EXPECT_EQ(CleanText("a  b\t c"), "a b c");
  EXPECT_EQ(CleanText("  a\x01\x02 b\n\n"), "a b");
  EXPECT_EQ(CleanText(""), "");
}

TEST(CleanTextTest, IsIdempotent) {
  Rng rng(5);
  const std::string alphabet = "ab-\n\t \x01.";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const size_t len = rng.Uniform(20);
    for (size_t i = 0; i < len; ++i) s += alphabet[rng.Uniform(alphabet.size())];
    const std::string once = CleanText(s);
    EXPECT_EQ(CleanText(once), once) << "input: " << s;
  }
  EXPECT_EQ(CleanText("already clean text."), "already clean text.");
}

TEST(SplitSentencesTest, EnglishTerminators) {
  EXPECT_EQ(Texts(SplitSentences(MakeDoc("A. B? C!"))),
            (std::vector<std::string>{"A.", "B?", "C!"}));
  EXPECT_EQ(Texts(SplitSentences(MakeDoc("HbA1c rose to 7.5 percent. Then \"stop.\" Done"))),
            (std::vector<std::string>{"HbA1c rose to 7.5 percent.", "Then \"stop.\"", "Done"}));
}

TEST(SplitSentencesTest, ChineseTerminators) {
  const auto s = SplitSentences(MakeDoc("早期发现。及时治疗!", Language::kZh));
  EXPECT_EQ(Texts(s), (std::vector<std::string>{"早期发现。", "及时治疗!"}));
}

TEST(SplitSentencesTest, NoTerminatorYieldsWholeText) {
  EXPECT_EQ(Texts(SplitSentences(MakeDoc("no terminator here"))),
            (std::vector<std::string>{"no terminator here"}));
  EXPECT_TRUE(SplitSentences(MakeDoc("")).empty());
}

TEST(SplitSentencesTest, IndicesAndPagesFollowDocument) {
  Document d = MakeDoc("One. Two.");
  d.pages.push_back({2, "Three."});
  const auto s = SplitSentences(d);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].sentence_index, 2);
  EXPECT_EQ(s[2].page_number, 2);
  EXPECT_EQ(s[1].page_number, 1);
}

TEST(LoadDocumentTest, SplitsPagesOnFormFeedAndMarker) {
  testing::TempDir dir;
  const auto path = dir.path() / "book.txt";
  std::ofstream(path) << "First page.\fSecond\npage.\n<page>\nThird-\npage.\n";
  const Document d = LoadDocument(path, Language::kEn);
  EXPECT_EQ(d.doc_id, "book");
  ASSERT_EQ(d.pages.size(), 3u);
  EXPECT_EQ(d.pages[1].text, "Second page.");
  EXPECT_EQ(d.pages[2].text, "Thirdpage.");
  EXPECT_EQ(d.pages[2].page_number, 3);
}

TEST(PercentileTest, NearestRank) {
  EXPECT_DOUBLE_EQ(NearestRankPercentile({0.1, 0.1, 0.9, 0.1}, 95), 0.9);
  EXPECT_DOUBLE_EQ(NearestRankPercentile({1, 2, 3, 4}, 50), 2);
  EXPECT_DOUBLE_EQ(NearestRankPercentile({1, 2, 3, 4}, 100), 4);
  std::vector<double> twenty;
  for (int i = 1; i <= 20; ++i) twenty.push_back(i);
  EXPECT_DOUBLE_EQ(NearestRankPercentile(twenty, 95), 19);
  EXPECT_THROW(NearestRankPercentile({1.0}, 0.0), Error);
}

TEST(SemanticChunkTest, IdenticalEmbeddingsGiveOneChunk) {
  const auto sentences = NumberedSentences(6);
  std::vector<EmbeddingVector> same(6, EmbeddingVector{{0.6, 0.8}, 2, ""});
  const auto chunks = SemanticChunk(sentences, same, {});
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].sentence_start, 0);
  EXPECT_EQ(chunks[0].sentence_end, 5);
  EXPECT_EQ(chunks[0].text, "S1. S2. S3. S4. S5. S6.");
}

TEST(SemanticChunkTest, HandComputedP95Break) {
  // Oracle: sorted distances {0.1,0.1,0.1,0.9}; rank ceil(0.95*4)=4 -> 0.9;
  // only d_3 >= 0.9, so the break falls after the third sentence.
  const auto chunks =
      SemanticChunk(NumberedSentences(5), VectorsWithDistances({0.1, 0.1, 0.9, 0.1}), {});
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].sentence_start, 0);
  EXPECT_EQ(chunks[0].sentence_end, 2);
  EXPECT_EQ(chunks[1].sentence_start, 3);
  EXPECT_EQ(chunks[1].sentence_end, 4);
}

TEST(SemanticChunkTest, Percentile100BreaksOnceAtMaximum) {
  ChunkOptions options;
  options.percentile = 100;
  const auto chunks = SemanticChunk(NumberedSentences(5),
                                    VectorsWithDistances({0.05, 0.1, 0.2, 0.3}), options);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].sentence_end, 3);
}

TEST(SemanticChunkTest, SingleSentenceAndMismatch) {
  const auto one = SemanticChunk(NumberedSentences(1), VectorsWithDistances({}), {});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_THROW(SemanticChunk(NumberedSentences(3), VectorsWithDistances({0.1}), {}), Error);
}

TEST(SemanticChunkTest, ForcedBreakAtMaxSentences) {
  ChunkOptions options;
  options.max_sentences = 4;
  std::vector<EmbeddingVector> same(10, EmbeddingVector{{1.0, 0.0}, 2, ""});
  const auto chunks = SemanticChunk(NumberedSentences(10), same, options);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[2].sentence_start, 8);
}

TEST(SemanticChunkTest, ChunkEmbeddingIsRenormalizedMean) {
  std::vector<EmbeddingVector> v = {{{1.0, 0.0}, 2, ""}, {{0.0, 1.0}, 2, ""}};
  const auto chunks = SemanticChunk(NumberedSentences(2), v, {});
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_NEAR(chunks[0].embedding.values[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(chunks[0].embedding.values[1], std::sqrt(0.5), 1e-12);
}

// Partition property and threshold monotonicity over random distance profiles.
TEST(SemanticChunkTest, PartitionAndMonotonicityProperties) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 1 + rng.Uniform(40);
    std::vector<double> distances;
    for (size_t i = 0; i + 1 < n; ++i) distances.push_back(0.01 + 0.9 * rng.UniformReal());
    const auto vectors = VectorsWithDistances(distances);
    const auto sentences = NumberedSentences(n);
    ChunkOptions options;
    options.max_sentences = 1 + static_cast<int>(rng.Uniform(12));
    size_t previous_breaks = SIZE_MAX;
    for (double p : {5.0, 25.0, 50.0, 75.0, 95.0, 100.0}) {
      options.percentile = p;
      const auto chunks = SemanticChunk(sentences, vectors, options);
      int expect_start = 0;
      for (const auto& c : chunks) {
        EXPECT_EQ(c.sentence_start, expect_start);
        EXPECT_GE(c.sentence_end, c.sentence_start);
        EXPECT_LE(c.sentence_end - c.sentence_start + 1, options.max_sentences);
        expect_start = c.sentence_end + 1;
      }
      EXPECT_EQ(expect_start, static_cast<int>(n));
      EXPECT_LE(chunks.size() - 1, previous_breaks);
      previous_breaks = chunks.size() - 1;
    }
  }
}

TEST(CorpusStoreTest, AnchorsResolveToChunkText) {
  Document d = MakeDoc("Diabetes drives AGEs. AGEs suppress osteoblasts. Bones weaken.");
  const auto sentences = SplitSentences(d);
  MockEmbeddingProvider embed(1);
  std::vector<std::string> texts;
  for (const auto& s : sentences) texts.push_back(s.text);
  const auto chunks = SemanticChunk(sentences, EmbedTexts(embed, texts), {});
  CorpusStore store({d}, sentences, chunks);
  for (const auto& c : chunks) {
    EXPECT_EQ(store.SpanText(c.doc_id, c.sentence_start, c.sentence_end), c.text);
    EXPECT_EQ(store.FindChunk(c.chunk_id), &store.chunks()[&c - &chunks[0]]);
  }
  EXPECT_FALSE(store.SpanText("doc", 2, 9).has_value());
  EXPECT_FALSE(store.SpanText("nope", 0, 0).has_value());
}

}  // namespace
}  // namespace kgbench
