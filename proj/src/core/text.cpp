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

#include "nestguard/core/text.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace nestguard {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Length of a valid sequence starting at `pos`, or 0.
std::size_t valid_sequence_length(std::string_view s, std::size_t pos) {
  auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return 1;
  std::size_t len;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > s.size()) return 0;
  char32_t cp = b0 & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i) {
    auto b = static_cast<unsigned char>(s[pos + i]);
    if (!is_continuation(b)) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

DecodedText decode_utf8_lossy(std::string_view bytes) {
  DecodedText out;
  out.text.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    auto len = valid_sequence_length(bytes, i);
    if (len > 0) {
      out.text.append(bytes.substr(i, len));
      i += len;
      continue;
    }
    if (!out.first_invalid_offset) out.first_invalid_offset = out.text.size();
    ++out.invalid_sequences;
    append_utf8(out.text, kReplacement);
    ++i;
    while (i < bytes.size() && is_continuation(static_cast<unsigned char>(bytes[i]))) ++i;
  }
  return out;
}

char32_t next_codepoint(std::string_view text, std::size_t& pos) {
  auto len = valid_sequence_length(text, pos);
  if (len == 0) {
    ++pos;
    return kReplacement;
  }
  auto b0 = static_cast<unsigned char>(text[pos]);
  char32_t cp = len == 1 ? b0 : b0 & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(text[pos + i]) & 0x3F);
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

LineIndex::LineIndex(std::string_view text) : size_(text.size()) {
  starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts_.push_back(i + 1);
  }
}

std::size_t LineIndex::line_of(std::size_t offset) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), std::min(offset, size_));
  return static_cast<std::size_t>(it - starts_.begin());
}

std::size_t LineIndex::column_of(std::size_t offset) const {
  offset = std::min(offset, size_);
  return offset - starts_[line_of(offset) - 1] + 1;
}

SourceSpan LineIndex::span(std::size_t begin, std::size_t end) const {
  return SourceSpan{begin, end, line_of(begin), column_of(begin), line_of(end),
                    column_of(end)};
}

std::size_t LineIndex::line_start(std::size_t line) const {
  if (line == 0 || line > starts_.size()) return size_;
  return starts_[line - 1];
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  auto b = text.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(kSpace);
  return text.substr(b, e - b + 1);
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool contains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    auto end = pos + needle.size();
    bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::string_view utf8_prefix(std::string_view text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return text;
  std::size_t cut = max_bytes;
  while (cut > 0 && is_continuation(static_cast<unsigned char>(text[cut]))) --cut;
  return text.substr(0, cut);
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) out.push_back({text.substr(start), start});
      break;
    }
    out.push_back({text.substr(start, nl - start), start});
    start = nl + 1;
  }
  return out;
}

std::string literal_evidence(std::string_view file_text,
                             std::string_view candidate, std::size_t hint,
                             const SourceSpan& fallback, bool& truncated) {
  std::string_view chosen;
  if (!candidate.empty()) {
    auto pos = file_text.find(candidate, std::min(hint, file_text.size()));
    if (pos == std::string_view::npos) pos = file_text.find(candidate);
    if (pos != std::string_view::npos) chosen = file_text.substr(pos, candidate.size());
  }
  if (chosen.empty()) {
    auto b = std::min(fallback.begin, file_text.size());
    auto e = std::clamp(fallback.end, b, file_text.size());
    chosen = file_text.substr(b, e - b);
  }
  auto capped = utf8_prefix(chosen, kMaxEvidenceBytes);
  truncated = capped.size() < chosen.size();
  return std::string(capped);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace nestguard
