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

#include "nestguard/extract/toml_reader.hpp"

#include <cctype>
#include <map>

#include "nestguard/core/text.hpp"

namespace nestguard {
namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  std::vector<TomlString> run() {
    while (true) {
      skip_blank_lines();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] == '[') {
        parse_header();
      } else {
        auto key = parse_key();
        skip_inline_ws();
        expect('=');
        skip_inline_ws();
        auto path = table_;
        path.insert(path.end(), key.begin(), key.end());
        parse_value(path, 0);
      }
      end_of_line();
    }
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw TomlParseError(what + " at offset " + std::to_string(pos_), pos_);
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_inline_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  void skip_comment() {
    if (pos_ < s_.size() && s_[pos_] == '#') {
      while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (pos_ < s_.size()) {
      skip_inline_ws();
      skip_comment();
      if (pos_ < s_.size() && (s_[pos_] == '\n' || s_[pos_] == '\r')) {
        ++pos_;
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines inside arrays.
  void skip_ws_multiline() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (pos_ < s_.size() && s_[pos_] == '\r') ++pos_;
    if (pos_ < s_.size() && s_[pos_] != '\n') fail("expected end of line");
    if (pos_ < s_.size()) ++pos_;
  }

  void parse_header() {
    bool array_table = s_.substr(pos_, 2) == "[[";
    pos_ += array_table ? 2 : 1;
    skip_inline_ws();
    auto key = parse_key();
    skip_inline_ws();
    if (array_table) {
      if (s_.substr(pos_, 2) != "]]") fail("expected ']]'");
      pos_ += 2;
      std::string joined;
      for (const auto& k : key) joined += k + '\x1f';
      auto index = array_table_counts_[joined]++;
      key.push_back("[" + std::to_string(index) + "]");
    } else {
      expect(']');
    }
    table_ = std::move(key);
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_inline_ws();
      if (pos_ >= s_.size()) fail("expected key");
      if (s_[pos_] == '"') {
        parts.push_back(parse_basic_string());
      } else if (s_[pos_] == '\'') {
        parts.push_back(parse_literal_string());
      } else {
        auto start = pos_;
        while (pos_ < s_.size() && is_bare_key_char(s_[pos_])) ++pos_;
        if (pos_ == start) fail("expected key");
        parts.emplace_back(s_.substr(start, pos_ - start));
      }
      skip_inline_ws();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        continue;
      }
      return parts;
    }
  }

  void parse_value(const std::vector<std::string>& path, int depth) {
    if (depth > 64) fail("nesting too deep");
    if (pos_ >= s_.size()) fail("expected value");
    char c = s_[pos_];
    std::size_t begin = pos_;
    if (c == '"' || c == '\'') {
      std::string value;
      if (s_.substr(pos_, 3) == "\"\"\"") {
        value = parse_multiline_basic();
      } else if (s_.substr(pos_, 3) == "'''") {
        value = parse_multiline_literal();
      } else if (c == '"') {
        value = parse_basic_string();
      } else {
        value = parse_literal_string();
      }
      out_.push_back({path, std::move(value), begin, pos_});
      return;
    }
    if (c == '[') {
      ++pos_;
      std::size_t index = 0;
      while (true) {
        skip_ws_multiline();
        if (pos_ >= s_.size()) fail("unterminated array");
        if (s_[pos_] == ']') {
          ++pos_;
          return;
        }
        auto item_path = path;
        item_path.push_back("[" + std::to_string(index++) + "]");
        parse_value(item_path, depth + 1);
        skip_ws_multiline();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        skip_ws_multiline();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return;
        }
        fail("expected ',' or ']'");
      }
    }
    if (c == '{') {
      ++pos_;
      skip_inline_ws();
      if (pos_ < s_.size() && s_[pos_] == '}') {
        ++pos_;
        return;
      }
      while (true) {
        auto key = parse_key();
        skip_inline_ws();
        expect('=');
        skip_inline_ws();
        auto member_path = path;
        member_path.insert(member_path.end(), key.begin(), key.end());
        parse_value(member_path, depth + 1);
        skip_inline_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect('}');
        return;
      }
    }
    // Numbers, booleans, dates: a run of value characters.
    auto start = pos_;
    while (pos_ < s_.size()) {
      char d = s_[pos_];
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '+' || d == '-' ||
          d == '.' || d == ':' || d == '_') {
        ++pos_;
      } else if (d == ' ' && pos_ + 1 < s_.size() &&
                 std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) &&
                 pos_ - start == 10) {
        ++pos_;  // "1979-05-27 07:32:00"
      } else {
        break;
      }
    }
    if (pos_ == start) fail("invalid value");
  }

  std::string parse_basic_string() {
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= s_.size() || s_[pos_] == '\n') fail("unterminated string");
      char c = s_[pos_];
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        parse_escape(out);
        continue;
      }
      out.push_back(c);
      ++pos_;
    }
  }

  void parse_escape(std::string& out) {
    ++pos_;
    if (pos_ >= s_.size()) fail("unterminated escape");
    char e = s_[pos_++];
    switch (e) {
      case 'b': out.push_back('\b'); return;
      case 't': out.push_back('\t'); return;
      case 'n': out.push_back('\n'); return;
      case 'f': out.push_back('\f'); return;
      case 'r': out.push_back('\r'); return;
      case 'e': out.push_back('\x1b'); return;
      case '"': out.push_back('"'); return;
      case '\\': out.push_back('\\'); return;
      case 'u':
      case 'U': {
        int n = e == 'u' ? 4 : 8;
        if (pos_ + n > s_.size()) fail("truncated unicode escape");
        char32_t cp = 0;
        for (int i = 0; i < n; ++i) {
          char h = s_[pos_++];
          cp <<= 4;
          if (h >= '0' && h <= '9') cp |= h - '0';
          else if (h >= 'a' && h <= 'f') cp |= h - 'a' + 10;
          else if (h >= 'A' && h <= 'F') cp |= h - 'A' + 10;
          else fail("bad unicode escape");
        }
        append_utf8(out, cp > 0x10FFFF ? 0xFFFD : cp);
        return;
      }
      default:
        fail("invalid escape");
    }
  }

  std::string parse_literal_string() {
    ++pos_;
    auto close = s_.find('\'', pos_);
    auto nl = s_.find('\n', pos_);
    if (close == std::string_view::npos || (nl != std::string_view::npos && nl < close)) {
      fail("unterminated literal string");
    }
    std::string out(s_.substr(pos_, close - pos_));
    pos_ = close + 1;
    return out;
  }

  std::string parse_multiline_basic() {
    pos_ += 3;
    if (s_.substr(pos_, 1) == "\n") ++pos_;
    else if (s_.substr(pos_, 2) == "\r\n") pos_ += 2;
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated multi-line string");
      if (s_.substr(pos_, 3) == "\"\"\"") {
        pos_ += 3;
        // Up to two extra quotes belong to the content.
        for (int extra = 0; extra < 2 && pos_ < s_.size() && s_[pos_] == '"'; ++extra) {
          out.push_back('"');
          ++pos_;
        }
        return out;
      }
      if (s_[pos_] == '\\') {
        auto after = pos_ + 1;
        while (after < s_.size() && (s_[after] == ' ' || s_[after] == '\t')) ++after;
        if (after < s_.size() && (s_[after] == '\n' || s_[after] == '\r')) {
          pos_ = after;
          while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          continue;
        }
        parse_escape(out);
        continue;
      }
      out.push_back(s_[pos_++]);
    }
  }

  std::string parse_multiline_literal() {
    pos_ += 3;
    if (s_.substr(pos_, 1) == "\n") ++pos_;
    else if (s_.substr(pos_, 2) == "\r\n") pos_ += 2;
    auto close = s_.find("'''", pos_);
    if (close == std::string_view::npos) fail("unterminated multi-line literal");
    std::string out(s_.substr(pos_, close - pos_));
    pos_ = close + 3;
    for (int extra = 0; extra < 2 && pos_ < s_.size() && s_[pos_] == '\''; ++extra) {
      out.push_back('\'');
      ++pos_;
    }
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<std::string> table_;
  std::map<std::string, std::size_t> array_table_counts_;
  std::vector<TomlString> out_;
};

}  // namespace

std::vector<TomlString> read_toml_strings(std::string_view text) {
  return Reader(text).run();
}

}  // namespace nestguard
