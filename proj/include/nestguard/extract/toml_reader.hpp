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

#ifndef NESTGUARD_EXTRACT_TOML_READER_HPP
#define NESTGUARD_EXTRACT_TOML_READER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nestguard {

/// One string leaf of a TOML document. `path` holds table and key segments
/// in order; array elements contribute "[i]" segments.
struct TomlString {
  std::vector<std::string> path;
  std::string value;
  std::size_t begin = 0;  // span of the string literal including quotes
  std::size_t end = 0;
};

class TomlParseError : public std::runtime_error {
 public:
  TomlParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Reads the TOML subset used by pyproject.toml files (tables, array
/// tables, dotted keys, all four string forms, arrays, inline tables and
/// scalar literals) and returns every string leaf in document order.
/// Non-string scalars are validated lexically and dropped.
std::vector<TomlString> read_toml_strings(std::string_view text);

}  // namespace nestguard

#endif  // NESTGUARD_EXTRACT_TOML_READER_HPP
