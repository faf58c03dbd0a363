// Copyright 2026 The NestGuard Authors
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

#include "nestguard/core/unicode.hpp"

#include "nestguard/core/text.hpp"

namespace nestguard {

std::optional<InvisibleClass> classify_invisible(char32_t cp, bool at_text_start) {
  switch (cp) {
    case 0x200B:
    case 0x200C:
    case 0x200D:
    case 0x2060:
      return InvisibleClass::ZeroWidth;
    case 0xFEFF:
      if (at_text_start) return std::nullopt;
      return InvisibleClass::ZeroWidth;
    case 0x200E:
    case 0x200F:
      return InvisibleClass::BidiControl;
    default:
      break;
  }
  if ((cp >= 0x202A && cp <= 0x202E) || (cp >= 0x2066 && cp <= 0x2069)) {
    return InvisibleClass::BidiControl;
  }
  if (cp >= 0xE0000 && cp <= 0xE007F) return InvisibleClass::TagBlock;
  return std::nullopt;
}

StrippedText strip_invisible_mapped(std::string_view text) {
  StrippedText out;
  out.text.reserve(text.size());
  out.origin.reserve(text.size() + 1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    char32_t cp = next_codepoint(text, pos);
    if (cp == 0xFEFF || classify_invisible(cp, start == 0)) continue;
    for (std::size_t i = start; i < pos; ++i) {
      out.text.push_back(text[i]);
      out.origin.push_back(i);
    }
  }
  out.origin.push_back(text.size());
  return out;
}

std::string strip_invisible(std::string_view text) {
  return std::move(strip_invisible_mapped(text).text);
}

std::string_view to_string(InvisibleClass cls) {
  switch (cls) {
    case InvisibleClass::ZeroWidth: return "zero-width";
    case InvisibleClass::BidiControl: return "bidi-control";
    case InvisibleClass::TagBlock: return "tag-block";
    case InvisibleClass::InvalidSequence: return "invalid-sequence";
  }
  return "";
}

}  // namespace nestguard
