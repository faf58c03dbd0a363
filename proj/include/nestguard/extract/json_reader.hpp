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

#ifndef NESTGUARD_EXTRACT_JSON_READER_HPP
#define NESTGUARD_EXTRACT_JSON_READER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nestguard {

struct JsonMember;

/// Strict JSON value that remembers where it came from. nlohmann/json does
/// not expose source offsets, and every surface needs a locator.
struct JsonValue {
  enum class Kind { Null, Bool, Number, String, Array, Object };

  Kind kind = Kind::Null;
  std::size_t begin = 0;  // offset of the first byte of the literal
  std::size_t end = 0;    // one past the last byte
  std::string text;       // decoded string, or the raw number/bool literal
  std::vector<JsonValue> items;
  std::vector<JsonMember> members;

  bool is_string() const { return kind == Kind::String; }
  bool is_array() const { return kind == Kind::Array; }
  bool is_object() const { return kind == Kind::Object; }

  /// Last member named `key` (later duplicates win), or nullptr.
  const JsonValue* find(std::string_view key) const;
};

struct JsonMember {
  std::string key;
  std::size_t key_begin = 0;
  JsonValue value;
};

class JsonParseError : public std::runtime_error {
 public:
  JsonParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses strict JSON (an initial UTF-8 BOM is skipped). Throws
/// JsonParseError on malformed input.
JsonValue parse_json(std::string_view text);

/// Blanks // and /* */ comments outside string literals and trailing commas
/// before } or ]. Every removed byte becomes a space except line breaks,
/// so the output has the input's length and line structure.
std::string strip_jsonc(std::string_view text);

}  // namespace nestguard

#endif  // NESTGUARD_EXTRACT_JSON_READER_HPP
