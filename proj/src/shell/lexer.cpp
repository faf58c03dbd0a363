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

#include "nestguard/shell/lexer.hpp"

#include <array>
#include <cctype>
#include <optional>

namespace nestguard::shell {
namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_meta(char c) {
  switch (c) {
    case ' ':
    case '\t':
    case '\r':
    case '\n':
    case ';':
    case '&':
    case '|':
    case '<':
    case '>':
    case '(':
    case ')':
      return true;
    default:
      return false;
  }
}

// Index one past the ')' closing the '(' at `open`, or nullopt.
std::optional<std::size_t> match_paren(std::string_view s, std::size_t open) {
  int depth = 0;
  std::size_t i = open;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\\') {
      i += 2;
      continue;
    }
    if (c == '\'') {
      auto k = s.find('\'', i + 1);
      if (k == std::string_view::npos) return std::nullopt;
      i = k + 1;
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < s.size() && s[i] != '"') i += s[i] == '\\' ? 2 : 1;
      if (i >= s.size()) return std::nullopt;
      ++i;
      continue;
    }
    if (c == '(') ++depth;
    if (c == ')' && --depth == 0) return i + 1;
    ++i;
  }
  return std::nullopt;
}

std::optional<std::size_t> match_backtick(std::string_view s, std::size_t open) {
  for (std::size_t i = open + 1; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
    } else if (s[i] == '`') {
      return i + 1;
    }
  }
  return std::nullopt;
}

std::size_t redirection_length(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
  bool has_fd = j > i;
  static constexpr std::array<std::string_view, 11> kOps = {
      "&>>", "&>", "<<<", ">>", ">&", ">|", "<<", "<&", "<>", ">", "<"};
  for (auto op : kOps) {
    if (has_fd && op.front() == '&') continue;
    if (s.substr(j, op.size()) != op) continue;
    // "<(" and ">(" start a process substitution word instead.
    if (!has_fd && op.size() == 1 && j + 1 < s.size() && s[j + 1] == '(') return 0;
    std::size_t k = j + op.size();
    if (op == ">&" || op == "<&") {
      // Duplication target written without a blank: 2>&1, >&-.
      std::size_t t = k;
      while (t < s.size() && std::isdigit(static_cast<unsigned char>(s[t]))) ++t;
      if (t < s.size() && s[t] == '-' && t == k) ++t;
      if (t > k && (t == s.size() || is_meta(s[t]))) k = t;
    }
    return k - i;
  }
  return 0;
}

std::size_t operator_length(std::string_view s, std::size_t i) {
  static constexpr std::array<std::string_view, 8> kOps = {"&&", "||", "|&", ";", "|", "&",
                                                           "(", ")"};
  for (auto op : kOps) {
    if (s.substr(i, op.size()) == op) return op.size();
  }
  return 0;
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  LexResult run() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (is_blank(c)) {
        ++i_;
      } else if (c == '\\' && i_ + 1 < s_.size() && s_[i_ + 1] == '\n') {
        i_ += 2;
      } else if (c == '\n') {
        push(TokenKind::Newline, i_, i_ + 1);
        ++i_;
      } else if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else if (auto n = redirection_length(s_, i_)) {
        push(TokenKind::Redirection, i_, i_ + n);
        i_ += n;
      } else if (auto m = operator_length(s_, i_)) {
        push(TokenKind::Operator, i_, i_ + m);
        i_ += m;
      } else {
        word();
      }
    }
    return std::move(out_);
  }

 private:
  Token& push(TokenKind kind, std::size_t b, std::size_t e) {
    Token t;
    t.kind = kind;
    t.begin = b;
    t.end = e;
    t.text = std::string(s_.substr(b, e - b));
    out_.tokens.push_back(std::move(t));
    return out_.tokens.back();
  }

  void unterminated(std::string_view what, std::string& value, std::size_t from) {
    out_.warnings.push_back("unterminated " + std::string(what) + " at offset " +
                            std::to_string(from));
    value.append(s_.substr(from));
    i_ = s_.size();
  }

  // Consumes a substitution starting at i_ whose opening paren sits at
  // `paren`. Returns false when unterminated (rest of input consumed).
  bool paren_substitution(std::size_t paren, std::string& value,
                          std::vector<Substitution>& subs) {
    auto close = match_paren(s_, paren);
    if (!close) {
      unterminated("command substitution", value, i_);
      return false;
    }
    // $(( )) is arithmetic, not a command.
    bool arithmetic = paren + 1 < s_.size() && s_[paren + 1] == '(' && s_[i_] == '$';
    if (!arithmetic) subs.push_back({i_, *close, paren + 1, *close - 1});
    value.append(s_.substr(i_, *close - i_));
    i_ = *close;
    return true;
  }

  bool backtick_substitution(std::string& value, std::vector<Substitution>& subs) {
    auto close = match_backtick(s_, i_);
    if (!close) {
      unterminated("backtick substitution", value, i_);
      return false;
    }
    subs.push_back({i_, *close, i_ + 1, *close - 1});
    value.append(s_.substr(i_, *close - i_));
    i_ = *close;
    return true;
  }

  void word() {
    std::size_t begin = i_;
    std::string value;
    std::vector<Substitution> subs;
    if ((s_[i_] == '<' || s_[i_] == '>') && i_ + 1 < s_.size() && s_[i_ + 1] == '(') {
      paren_substitution(i_ + 1, value, subs);
    }
    while (i_ < s_.size() && !is_meta(s_[i_])) {
      char c = s_[i_];
      if (c == '\\') {
        if (i_ + 1 < s_.size() && s_[i_ + 1] != '\n') value.push_back(s_[i_ + 1]);
        i_ += 2;
      } else if (c == '\'') {
        auto k = s_.find('\'', i_ + 1);
        if (k == std::string_view::npos) {
          unterminated("single quote", value, i_ + 1);
          break;
        }
        value.append(s_.substr(i_ + 1, k - i_ - 1));
        i_ = k + 1;
      } else if (c == '"') {
        if (!double_quoted(value, subs)) break;
      } else if (c == '$' && i_ + 1 < s_.size() && s_[i_ + 1] == '(') {
        if (!paren_substitution(i_ + 1, value, subs)) break;
      } else if (c == '$' && i_ + 1 < s_.size() && s_[i_ + 1] == '{') {
        auto close = s_.find('}', i_ + 2);
        auto stop = close == std::string_view::npos ? s_.size() : close + 1;
        value.append(s_.substr(i_, stop - i_));
        i_ = stop;
      } else if (c == '`') {
        if (!backtick_substitution(value, subs)) break;
      } else {
        value.push_back(c);
        ++i_;
      }
    }
    i_ = std::min(i_, s_.size());
    Token& t = push(TokenKind::Word, begin, i_);
    t.value = std::move(value);
    t.substitutions = std::move(subs);
  }

  bool double_quoted(std::string& value, std::vector<Substitution>& subs) {
    std::size_t open = i_;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      char c = s_[i_];
      if (c == '\\' && i_ + 1 < s_.size()) {
        char n = s_[i_ + 1];
        if (n == '\n') {
          // continuation: dropped
        } else if (n == '$' || n == '`' || n == '"' || n == '\\') {
          value.push_back(n);
        } else {
          value.push_back('\\');
          value.push_back(n);
        }
        i_ += 2;
      } else if (c == '$' && i_ + 1 < s_.size() && s_[i_ + 1] == '(') {
        if (!paren_substitution(i_ + 1, value, subs)) return false;
      } else if (c == '`') {
        if (!backtick_substitution(value, subs)) return false;
      } else {
        value.push_back(c);
        ++i_;
      }
    }
    if (i_ >= s_.size()) {
      out_.warnings.push_back("unterminated double quote at offset " + std::to_string(open));
      i_ = s_.size();
      return false;
    }
    ++i_;
    return true;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  LexResult out_;
};

}  // namespace

LexResult lex_command(std::string_view text) { return Lexer(text).run(); }

}  // namespace nestguard::shell
