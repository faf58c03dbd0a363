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

#ifndef NESTGUARD_CORE_TEXT_HPP
#define NESTGUARD_CORE_TEXT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nestguard/core/model.hpp"

namespace nestguard {

struct DecodedText {
  std::string text;  // valid UTF-8
  std::size_t invalid_sequences = 0;
  // Offset (in `text`) of the first U+FFFD inserted for an invalid sequence.
  std::optional<std::size_t> first_invalid_offset;
};

/// Lossy UTF-8 decode: each maximal invalid subsequence becomes U+FFFD.
DecodedText decode_utf8_lossy(std::string_view bytes);

/// Decodes one codepoint at `pos` of valid UTF-8; advances `pos`.
char32_t next_codepoint(std::string_view text, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

/// Maps byte offsets to 1-based line/column (column counted in bytes).
class LineIndex {
 public:
  explicit LineIndex(std::string_view text);

  std::size_t line_of(std::size_t offset) const;
  std::size_t column_of(std::size_t offset) const;
  SourceSpan span(std::size_t begin, std::size_t end) const;
  std::size_t line_start(std::size_t line) const;
  std::size_t line_count() const { return starts_.size(); }

 private:
  std::vector<std::size_t> starts_;
  std::size_t size_;
};

std::string ascii_lower(std::string_view text);
std::string_view trim(std::string_view text);
bool iequals(std::string_view a, std::string_view b);

/// True when `needle` occurs in `haystack` bounded by non-word characters.
bool contains_word(std::string_view haystack, std::string_view needle);

/// Longest prefix of at most `max_bytes` that does not split a codepoint.
std::string_view utf8_prefix(std::string_view text, std::size_t max_bytes);

/// Splits on '\n', keeping the byte offset of each line.
struct Line {
  std::string_view text;
  std::size_t offset;
};
std::vector<Line> split_lines(std::string_view text);

/// Picks evidence that is guaranteed to be a literal substring of
/// `file_text`: `candidate` itself when it occurs (preferring the first
/// occurrence at or after `hint`), otherwise the slice of `fallback`.
/// The result is capped at kMaxEvidenceBytes; `truncated` reports a cut.
std::string literal_evidence(std::string_view file_text,
                             std::string_view candidate, std::size_t hint,
                             const SourceSpan& fallback, bool& truncated);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace nestguard

#endif  // NESTGUARD_CORE_TEXT_HPP
