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

#ifndef NESTGUARD_CORE_UNICODE_HPP
#define NESTGUARD_CORE_UNICODE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nestguard {

/// Codepoints that change how text is read or rendered without being seen.
enum class InvisibleClass { ZeroWidth, BidiControl, TagBlock, InvalidSequence };

/// U+FEFF counts as zero-width only away from the start of the text, where
/// it is a byte-order mark.
std::optional<InvisibleClass> classify_invisible(char32_t cp, bool at_text_start);

/// Text with the invisible codepoints removed, plus where each remaining
/// byte came from so spans can be mapped back.
struct StrippedText {
  std::string text;
  // origin[i] is the source offset of text[i]; origin[text.size()] is the
  // source length.
  std::vector<std::size_t> origin;

  std::size_t to_source(std::size_t offset) const { return origin[offset]; }
  // For exclusive ends: stops right after the last kept byte.
  std::size_t to_source_end(std::size_t offset) const {
    return offset == 0 ? origin[0] : origin[offset - 1] + 1;
  }
};

/// Removes every codepoint classify_invisible reports, and U+FEFF anywhere
/// (valid UTF-8 input).
StrippedText strip_invisible_mapped(std::string_view text);

std::string strip_invisible(std::string_view text);

std::string_view to_string(InvisibleClass cls);

}  // namespace nestguard

#endif  // NESTGUARD_CORE_UNICODE_HPP
