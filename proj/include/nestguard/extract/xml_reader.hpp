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

#ifndef NESTGUARD_EXTRACT_XML_READER_HPP
#define NESTGUARD_EXTRACT_XML_READER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nestguard {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // direct character data, entities decoded, CDATA kept
  std::vector<XmlElement> children;
  std::size_t begin = 0;       // '<' of the start tag
  std::size_t end = 0;         // one past the end tag
  std::size_t text_begin = 0;  // first byte after the start tag

  const XmlElement* child(std::string_view child_name) const;
};

class XmlParseError : public std::runtime_error {
 public:
  XmlParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Non-validating reader for well-formed XML: checks tag balance, skips
/// prolog, comments, processing instructions and DOCTYPE. Returns the root.
XmlElement parse_xml(std::string_view text);

/// Decodes the five predefined entities and numeric character references.
/// Unknown entities are kept verbatim.
std::string decode_xml_entities(std::string_view text);

}  // namespace nestguard

#endif  // NESTGUARD_EXTRACT_XML_READER_HPP
