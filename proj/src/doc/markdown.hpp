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

#ifndef NESTGUARD_SRC_DOC_MARKDOWN_HPP
#define NESTGUARD_SRC_DOC_MARKDOWN_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nestguard::doc {

struct FencedBlock {
  std::size_t open_line = 0;   // 0-based
  std::size_t close_line = 0;  // line count when unclosed
  std::size_t begin = 0;       // byte range of the whole block
  std::size_t end = 0;
  std::string content;
};

struct InlineCode {
  std::size_t line = 0;
  std::size_t begin = 0;  // byte range including the backticks
  std::size_t end = 0;
  std::string content;
};

struct MarkdownCode {
  std::vector<FencedBlock> fences;
  std::vector<InlineCode> inline_spans;
};

// Fenced blocks (``` or ~~~, up to three spaces of indent) and single-line
// backtick code spans outside them.
MarkdownCode markdown_code(std::string_view text);

// Byte ranges of all code, sorted.
std::vector<std::pair<std::size_t, std::size_t>> code_ranges(std::string_view text);

}  // namespace nestguard::doc

#endif  // NESTGUARD_SRC_DOC_MARKDOWN_HPP
