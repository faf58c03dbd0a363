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

#include "nestguard/extract/xml_reader.hpp"

#include <cctype>
#include <charconv>

#include "nestguard/core/text.hpp"

namespace nestguard {
namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  XmlElement run() {
    skip_misc();
    if (pos_ >= s_.size() || s_[pos_] != '<') fail("expected root element");
    XmlElement root = parse_element(0);
    skip_misc();
    if (pos_ != s_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw XmlParseError(what + " at offset " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void skip_until(std::string_view terminator) {
    auto close = s_.find(terminator, pos_);
    if (close == std::string_view::npos) fail("unterminated markup");
    pos_ = close + terminator.size();
  }

  // Whitespace, comments, PIs and DOCTYPE outside the root element.
  void skip_misc() {
    while (true) {
      skip_ws();
      if (s_.substr(pos_, 4) == "<!--") {
        skip_until("-->");
      } else if (s_.substr(pos_, 2) == "<?") {
        skip_until("?>");
      } else if (s_.substr(pos_, 9) == "<!DOCTYPE") {
        int depth = 0;
        while (pos_ < s_.size()) {
          char c = s_[pos_++];
          if (c == '[') ++depth;
          if (c == ']') --depth;
          if (c == '>' && depth <= 0) break;
        }
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    auto start = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected name");
    return std::string(s_.substr(start, pos_ - start));
  }

  XmlElement parse_element(int depth) {
    if (depth > 256) fail("nesting too deep");
    XmlElement el;
    el.begin = pos_;
    ++pos_;  // '<'
    el.name = parse_name();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated start tag");
      if (s_.substr(pos_, 2) == "/>") {
        pos_ += 2;
        el.text_begin = el.end = pos_;
        return el;
      }
      if (s_[pos_] == '>') {
        ++pos_;
        break;
      }
      auto attr = parse_name();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after attribute");
      ++pos_;
      skip_ws();
      if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted attribute");
      char quote = s_[pos_++];
      auto close = s_.find(quote, pos_);
      if (close == std::string_view::npos) fail("unterminated attribute");
      el.attributes.emplace_back(attr, decode_xml_entities(s_.substr(pos_, close - pos_)));
      pos_ = close + 1;
    }
    el.text_begin = pos_;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated element <" + el.name + ">");
      if (s_.substr(pos_, 4) == "<!--") {
        skip_until("-->");
      } else if (s_.substr(pos_, 9) == "<![CDATA[") {
        pos_ += 9;
        auto close = s_.find("]]>", pos_);
        if (close == std::string_view::npos) fail("unterminated CDATA");
        el.text.append(s_.substr(pos_, close - pos_));
        pos_ = close + 3;
      } else if (s_.substr(pos_, 2) == "<?") {
        skip_until("?>");
      } else if (s_.substr(pos_, 2) == "</") {
        pos_ += 2;
        auto closing = parse_name();
        if (closing != el.name) fail("mismatched end tag </" + closing + "> for <" + el.name + ">");
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '>') fail("expected '>'");
        ++pos_;
        el.end = pos_;
        return el;
      } else if (s_[pos_] == '<') {
        el.children.push_back(parse_element(depth + 1));
      } else {
        auto next = s_.find('<', pos_);
        if (next == std::string_view::npos) next = s_.size();
        el.text += decode_xml_entities(s_.substr(pos_, next - pos_));
        pos_ = next;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

const XmlElement* XmlElement::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

XmlElement parse_xml(std::string_view text) { return Parser(text).run(); }

std::string decode_xml_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(text[i++]);
      continue;
    }
    auto name = text.substr(i + 1, semi - i - 1);
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (name.size() > 1 && name[0] == '#') {
      unsigned value = 0;
      bool hex = name[1] == 'x' || name[1] == 'X';
      auto digits = name.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                       value, hex ? 16 : 10);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || value > 0x10FFFF) {
        out.append(text.substr(i, semi - i + 1));
      } else {
        append_utf8(out, value);
      }
    } else {
      out.append(text.substr(i, semi - i + 1));
    }
    i = semi + 1;
  }
  return out;
}

}  // namespace nestguard
