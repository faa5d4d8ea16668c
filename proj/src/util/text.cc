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

#include "kgbench/util/text.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "kgbench/util/error.h"

namespace kgbench {

std::string_view LanguageTag(Language language) {
  switch (language) {
    case Language::kEn: return "EN";
    case Language::kZh: return "ZH";
    case Language::kOther: return "other";
  }
  return "other";
}

Language ParseLanguage(std::string_view tag) {
  if (tag == "EN" || tag == "en") return Language::kEn;
  if (tag == "ZH" || tag == "zh") return Language::kZh;
  if (tag == "other") return Language::kOther;
  Fail(ErrorKind::kValidation, "unknown language tag: " + std::string(tag));
}

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xe0) == 0xc0) {
      cp = b0 & 0x1f;
      extra = 1;
    } else if ((b0 & 0xf0) == 0xe0) {
      cp = b0 & 0x0f;
      extra = 2;
    } else if ((b0 & 0xf8) == 0xf0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(0xfffd);
      ++i;
      continue;
    }
    if (i + extra >= text.size()) {
      out.push_back(0xfffd);
      break;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xc0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3f);
    }
    if (!ok) {
      out.push_back(0xfffd);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }
  return out;
}

size_t CodePointCount(std::string_view text) {
  size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xc0) != 0x80) ++n;
  }
  return n;
}

bool IsCjk(char32_t c) {
  return (c >= 0x4e00 && c <= 0x9fff) || (c >= 0x3400 && c <= 0x4dbf) ||
         (c >= 0x20000 && c <= 0x2a6df) || (c >= 0xf900 && c <= 0xfaff) ||
         (c >= 0x3040 && c <= 0x30ff);
}

bool IsSpace(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) || c == U'\t' ||
         c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
}

std::string NormalizeForMatch(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  source.foldCase();
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) normalized = source;
  std::string utf8;
  normalized.toUTF8String(utf8);

  std::u32string cps = DecodeUtf8(utf8);
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
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

TokenMode TokenModeFor(Language language) {
  return language == Language::kZh ? TokenMode::kCharacter : TokenMode::kWord;
}

std::vector<Token> Tokenize(std::string_view text, TokenMode mode) {
  std::vector<Token> tokens;
  size_t i = 0;
  size_t word_begin = std::string::npos;
  std::string word;
  auto flush = [&](size_t end) {
    if (word_begin != std::string::npos) {
      tokens.push_back({NormalizeForMatch(word), word_begin, end});
      word.clear();
      word_begin = std::string::npos;
    }
  };
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    size_t len = b0 < 0x80 ? 1 : (b0 & 0xe0) == 0xc0 ? 2
                                 : (b0 & 0xf0) == 0xe0 ? 3
                                 : (b0 & 0xf8) == 0xf0 ? 4
                                                       : 1;
    if (i + len > text.size()) len = text.size() - i;
    const std::string_view piece = text.substr(i, len);
    const std::u32string cps = DecodeUtf8(piece);
    const char32_t c = cps.empty() ? 0xfffd : cps[0];
    const bool alnum = u_isalnum(static_cast<UChar32>(c));
    if (mode == TokenMode::kCharacter) {
      if (!IsSpace(c) && !u_ispunct(static_cast<UChar32>(c))) {
        tokens.push_back({NormalizeForMatch(piece), i, i + len});
      }
    } else if (IsCjk(c)) {
      flush(i);
      tokens.push_back({NormalizeForMatch(piece), i, i + len});
    } else if (alnum) {
      if (word_begin == std::string::npos) word_begin = i;
      word.append(piece);
    } else {
      flush(i);
    }
    i += len;
  }
  flush(text.size());
  return tokens;
}

std::vector<std::string> TokenTexts(std::string_view text, TokenMode mode) {
  std::vector<std::string> out;
  for (auto& t : Tokenize(text, mode)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace kgbench
