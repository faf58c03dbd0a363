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

#ifndef NESTGUARD_TESTS_SUPPORT_SHELL_ORACLE_HPP
#define NESTGUARD_TESTS_SUPPORT_SHELL_ORACLE_HPP

// Reference tokenizer used only by tests. It follows the POSIX token
// recognition rules literally (operator extension, quoting, substitution
// skipping, blank delimiting, IO_NUMBER) in one character-driven pass, then
// applies quote removal as a separate step. It shares no code with the
// production lexer.

#include <cctype>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nestguard::oracle {

struct RefRedirect {
  std::string op;  // operator with any io-number prefix, e.g. "2>&", ">"
  std::string target;

  friend bool operator==(const RefRedirect&, const RefRedirect&) = default;
};

struct RefSegment {
  std::vector<std::string> argv;
  std::vector<RefRedirect> redirects;
  std::string connector;  // "&&", "||", ";", "|", "&", or "" at the end

  friend bool operator==(const RefSegment&, const RefSegment&) = default;

  // Readable gtest failure output.
  friend std::ostream& operator<<(std::ostream& os, const RefSegment& s) {
    os << "{argv:";
    for (const auto& a : s.argv) os << " [" << a << "]";
    for (const auto& r : s.redirects) os << " redir[" << r.op << " " << r.target << "]";
    return os << " conn:" << s.connector << "}";
  }
};

namespace detail {

inline const std::vector<std::string>& operator_table() {
  static const std::vector<std::string> ops = {
      "&&", "||", ";", "|", "&", "|&", ">", ">>", ">|", ">&", "<", "<<", "<<<",
      "<&", "<>", "&>", "&>>", "(", ")", "\n"};
  return ops;
}

// An io-number prefix ("2" in "2>&") does not take part in operator lookup.
inline std::string op_body(const std::string& s) {
  auto k = s.find_first_not_of("0123456789");
  return k == std::string::npos ? std::string() : s.substr(k);
}

inline bool is_operator_prefix(const std::string& s) {
  auto body = op_body(s);
  if (body.empty()) return false;
  for (const auto& op : operator_table()) {
    if (op.compare(0, body.size(), body) == 0) return true;
  }
  return false;
}

inline bool is_operator(const std::string& s) {
  auto body = op_body(s);
  for (const auto& op : operator_table()) {
    if (op == body) return true;
  }
  return false;
}

struct RawToken {
  std::string text;
  bool is_op;
};

// Index just past the ')' matching the '(' of a "$(" starting at i.
inline std::size_t skip_dollar_paren(std::string_view s, std::size_t i) {
  int depth = 0;
  for (std::size_t j = i + 1; j < s.size(); ++j) {
    char c = s[j];
    if (c == '\\') {
      ++j;
    } else if (c == '\'') {
      auto k = s.find('\'', j + 1);
      if (k == std::string_view::npos) return s.size();
      j = k;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return j + 1;
    }
  }
  return s.size();
}

inline std::vector<RawToken> recognize(std::string_view s) {
  std::vector<RawToken> out;
  std::string cur;
  bool cur_is_op = false;
  auto delimit = [&] {
    if (!cur.empty()) out.push_back({cur, cur_is_op});
    cur.clear();
    cur_is_op = false;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (cur_is_op) {
      std::string ext = cur + c;
      if (is_operator_prefix(ext)) {
        cur = ext;
        ++i;
        continue;
      }
      // Back off to the longest complete operator.
      while (!is_operator(cur) && cur.size() > 1) {
        cur.pop_back();
        --i;
      }
      delimit();
      continue;
    }
    if (c == '\\') {
      if (i + 1 < s.size() && s[i + 1] == '\n') {
        i += 2;
        continue;
      }
      cur.push_back(c);
      if (i + 1 < s.size()) cur.push_back(s[i + 1]);
      i += 2;
      continue;
    }
    if (c == '\'') {
      auto k = s.find('\'', i + 1);
      auto stop = k == std::string_view::npos ? s.size() : k + 1;
      cur.append(s.substr(i, stop - i));
      i = stop;
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '"') {
        if (s[j] == '\\') {
          j += 2;
        } else if (s[j] == '$' && j + 1 < s.size() && s[j + 1] == '(') {
          j = skip_dollar_paren(s, j);
        } else {
          ++j;
        }
      }
      auto stop = std::min(j + 1, s.size());
      cur.append(s.substr(i, stop - i));
      i = stop;
      continue;
    }
    if (c == '$' && i + 1 < s.size() && s[i + 1] == '(') {
      auto stop = skip_dollar_paren(s, i);
      cur.append(s.substr(i, stop - i));
      i = stop;
      continue;
    }
    if (c == '`') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '`') j += s[j] == '\\' ? 2 : 1;
      auto stop = std::min(j + 1, s.size());
      cur.append(s.substr(i, stop - i));
      i = stop;
      continue;
    }
    if (is_operator_prefix(std::string(1, c))) {
      // IO_NUMBER: an all-digit word directly before '<' or '>'.
      bool io_number = !cur.empty() && (c == '<' || c == '>') &&
                       cur.find_first_not_of("0123456789") == std::string::npos;
      if (io_number) {
        cur.push_back(c);
        cur_is_op = true;
        ++i;
        continue;
      }
      delimit();
      cur = std::string(1, c);
      cur_is_op = true;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t') {
      delimit();
      ++i;
      continue;
    }
    if (c == '#' && cur.empty()) {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    cur.push_back(c);
    ++i;
  }
  delimit();
  return out;
}

inline std::string remove_quotes(std::string_view w) {
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    char c = w[i];
    if (c == '\\') {
      if (i + 1 < w.size()) out.push_back(w[i + 1]);
      i += 2;
    } else if (c == '\'') {
      auto k = w.find('\'', i + 1);
      if (k == std::string_view::npos) k = w.size();
      out.append(w.substr(i + 1, k - i - 1));
      i = k + 1;
    } else if (c == '"') {
      ++i;
      while (i < w.size() && w[i] != '"') {
        if (w[i] == '\\' && i + 1 < w.size() &&
            std::string_view("$`\"\\\n").find(w[i + 1]) != std::string_view::npos) {
          out.push_back(w[i + 1]);
          i += 2;
        } else if (w[i] == '$' && i + 1 < w.size() && w[i + 1] == '(') {
          auto stop = skip_dollar_paren(w, i);
          out.append(w.substr(i, stop - i));
          i = stop;
        } else {
          out.push_back(w[i++]);
        }
      }
      ++i;
    } else if (c == '$' && i + 1 < w.size() && w[i + 1] == '(') {
      auto stop = skip_dollar_paren(w, i);
      out.append(w.substr(i, stop - i));
      i = stop;
    } else if (c == '`') {
      std::size_t j = i + 1;
      while (j < w.size() && w[j] != '`') j += w[j] == '\\' ? 2 : 1;
      auto stop = std::min(j + 1, w.size());
      out.append(w.substr(i, stop - i));
      i = stop;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

inline bool is_redirect_op(const std::string& op) {
  auto body = op.substr(op.find_first_not_of("0123456789"));
  return body == ">" || body == ">>" || body == ">|" || body == ">&" || body == "<" ||
         body == "<<" || body == "<<<" || body == "<&" || body == "<>" || body == "&>" ||
         body == "&>>";
}

}  // namespace detail

/// Segments of `cmd` with quote-resolved argv. Newline separates like ";";
/// parentheses are grouping noise and dropped.
inline std::vector<RefSegment> reference_segments(std::string_view cmd) {
  auto tokens = detail::recognize(cmd);
  std::vector<RefSegment> out;
  RefSegment cur;
  auto flush = [&](const std::string& connector) {
    if (cur.argv.empty() && cur.redirects.empty()) return;
    cur.connector = connector;
    out.push_back(std::move(cur));
    cur = RefSegment{};
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (!t.is_op) {
      cur.argv.push_back(detail::remove_quotes(t.text));
      continue;
    }
    if (t.text == "(" || t.text == ")") continue;
    if (detail::is_redirect_op(t.text)) {
      RefRedirect r{t.text, ""};
      // Duplication targets like "&1" are folded into the operator token by
      // the lexer; here they arrive as a following word.
      if (i + 1 < tokens.size() && !tokens[i + 1].is_op) {
        r.target = detail::remove_quotes(tokens[i + 1].text);
        ++i;
      }
      cur.redirects.push_back(r);
      continue;
    }
    std::string conn = t.text == "\n" ? ";" : t.text == "|&" ? "|" : t.text;
    flush(conn);
  }
  flush("");
  if (!out.empty() && out.back().connector == ";") out.back().connector = "";
  return out;
}

/// Random commands from the restricted grammar: plain/quoted/escaped words,
/// the five connectors, redirections and one level of $( ) substitution.
class CommandGenerator {
 public:
  explicit CommandGenerator(std::uint32_t seed) : rng_(seed) {}

  std::string command(bool allow_operators = true) {
    std::string out;
    int segments = allow_operators ? pick(1, 4) : 1;
    for (int s = 0; s < segments; ++s) {
      if (s > 0) {
        static const char* kConnectors[] = {" && ", " || ", "; ", " | ", " & "};
        out += kConnectors[pick(0, 4)];
      }
      out += segment(allow_operators);
    }
    if (allow_operators && pick(0, 9) == 0) out += " &";
    return out;
  }

  std::string word(bool allow_operators) {
    std::string w;
    int parts = pick(1, 3);
    for (int p = 0; p < parts; ++p) {
      switch (pick(0, allow_operators ? 5 : 3)) {
        case 0:
        case 1:
          w += plain();
          break;
        case 2:
          w += "'" + quoted_body(allow_operators, '\'') + "'";
          break;
        case 3:
          w += "\"" + quoted_body(allow_operators, '"') + "\"";
          break;
        case 4:
          w += "\\" + std::string(1, "&|; <>"[pick(0, 5)]);
          break;
        default:
          w += "$(" + plain() + " " + plain() + ")";
          break;
      }
    }
    return w;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string plain() {
    static const std::string kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789._/-=,+:%@";
    std::string out;
    int n = pick(1, 8);
    for (int i = 0; i < n; ++i) {
      out.push_back(kAlphabet[static_cast<std::size_t>(pick(0, static_cast<int>(kAlphabet.size()) - 1))]);
    }
    if (out.front() == '-' && pick(0, 1) == 0) out.front() = 'x';
    return out;
  }

  std::string quoted_body(bool allow_operators, char quote) {
    std::string out;
    int n = pick(0, 3);
    for (int i = 0; i < n; ++i) {
      if (i > 0) out.push_back(' ');
      int kind = pick(0, allow_operators ? 3 : 1);
      if (kind <= 1) {
        out += plain();
      } else if (kind == 2) {
        static const char* kOps[] = {"&&", "||", ";", "|", "&", ">", "<", "2>&1"};
        out += kOps[pick(0, 7)];
      } else if (quote == '"') {
        static const char* kEsc[] = {"\\\"", "\\\\", "\\$", "$(id -u)"};
        out += kEsc[pick(0, 3)];
      } else {
        out += "\"";
      }
    }
    return out;
  }

  std::string segment(bool allow_operators) {
    std::string out = plain();
    if (out.find_first_not_of("0123456789") == std::string::npos) out += "x";
    int words = pick(0, 3);
    for (int i = 0; i < words; ++i) out += " " + word(allow_operators);
    if (allow_operators && pick(0, 3) == 0) {
      static const char* kRedirs[] = {" > out.txt", " >> log", " < in", " 2>&1", " >& /dev/null",
                                      " 0>&1", " 2> err"};
      out += kRedirs[pick(0, 6)];
    }
    return out;
  }

  std::mt19937 rng_;
};

}  // namespace nestguard::oracle

#endif  // NESTGUARD_TESTS_SUPPORT_SHELL_ORACLE_HPP
