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

#include "markdown.hpp"

#include <algorithm>

#include "nestguard/core/text.hpp"

namespace nestguard::doc {
namespace {

struct FenceMarker {
  char ch = 0;
  std::size_t length = 0;
};

FenceMarker fence_marker(std::string_view line) {
  std::size_t indent = 0;
  while (indent < line.size() && indent < 4 && line[indent] == ' ') ++indent;
  if (indent > 3 || indent >= line.size()) return {};
  char c = line[indent];
  if (c != '`' && c != '~') return {};
  std::size_t n = 0;
  while (indent + n < line.size() && line[indent + n] == c) ++n;
  if (n < 3) return {};
  // Backtick fences may not carry backticks in the info string.
  if (c == '`' && line.substr(indent + n).find('`') != std::string_view::npos) return {};
  return {c, n};
}

bool closes(std::string_view line, const FenceMarker& open) {
  auto m = fence_marker(line);
  if (m.ch != open.ch || m.length < open.length) return false;
  auto rest = trim(line);
  return rest.find_first_not_of(open.ch) == std::string_view::npos;
}

void scan_inline(const Line& line, std::size_t index, std::vector<InlineCode>& out) {
  std::string_view s = line.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '`') {
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i + run < s.size() && s[i + run] == '`') ++run;
    std::size_t j = i + run;
    std::size_t close = std::string_view::npos;
    while (j < s.size()) {
      if (s[j] != '`') {
        ++j;
        continue;
      }
      std::size_t r = 0;
      while (j + r < s.size() && s[j + r] == '`') ++r;
      if (r == run) {
        close = j;
        break;
      }
      j += r;
    }
    if (close == std::string_view::npos) {
      i += run;
      continue;
    }
    out.push_back({index, line.offset + i, line.offset + close + run,
                   std::string(trim(s.substr(i + run, close - i - run)))});
    i = close + run;
  }
}

}  // namespace

MarkdownCode markdown_code(std::string_view text) {
  MarkdownCode out;
  auto lines = split_lines(text);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    auto open = fence_marker(lines[l].text);
    if (open.length == 0) {
      scan_inline(lines[l], l, out.inline_spans);
      continue;
    }
    FencedBlock block;
    block.open_line = l;
    block.begin = lines[l].offset;
    std::size_t k = l + 1;
    for (; k < lines.size(); ++k) {
      if (closes(lines[k].text, open)) break;
      block.content += lines[k].text;
      block.content.push_back('\n');
    }
    block.close_line = k;
    block.end = k < lines.size() ? lines[k].offset + lines[k].text.size() : text.size();
    out.fences.push_back(std::move(block));
    l = k;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> code_ranges(std::string_view text) {
  auto code = markdown_code(text);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& f : code.fences) out.emplace_back(f.begin, f.end);
  for (const auto& c : code.inline_spans) out.emplace_back(c.begin, c.end);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nestguard::doc
