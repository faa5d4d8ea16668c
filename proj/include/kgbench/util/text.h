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

#ifndef KGBENCH_UTIL_TEXT_H_
#define KGBENCH_UTIL_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kgbench {

enum class Language { kEn, kZh, kOther };

std::string_view LanguageTag(Language language);  // "EN", "ZH", "other"
Language ParseLanguage(std::string_view tag);     // throws kValidation

// Invalid UTF-8 sequences decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);
size_t CodePointCount(std::string_view text);

bool IsCjk(char32_t c);
bool IsSpace(char32_t c);

// NFC, full case folding, whitespace runs collapsed to one space, trimmed.
// Used for every case-insensitive comparison in the project.
std::string NormalizeForMatch(std::string_view text);

struct Token {
  std::string text;  // normalized form
  size_t begin = 0;  // byte offsets into the source string
  size_t end = 0;
};

enum class TokenMode {
  kWord,       // alphanumeric runs; CJK ideographs stand alone
  kCharacter,  // every non-space, non-punctuation code point
};

TokenMode TokenModeFor(Language language);

std::vector<Token> Tokenize(std::string_view text, TokenMode mode);

// Convenience: normalized token texts only.
std::vector<std::string> TokenTexts(std::string_view text, TokenMode mode);

}  // namespace kgbench

#endif  // KGBENCH_UTIL_TEXT_H_
