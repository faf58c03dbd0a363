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

#include <cctype>
#include <string>
#include <vector>

#include "nestguard/extract/extractors.hpp"
#include "surface_builder.hpp"

namespace nestguard {
namespace {

using detail::SurfaceBuilder;

bool ends_with_backslash(std::string_view line) {
  auto t = line;
  if (!t.empty() && t.back() == '\r') t.remove_suffix(1);
  std::size_t n = 0;
  while (n < t.size() && t[t.size() - 1 - n] == '\\') ++n;
  return n % 2 == 1;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_assignment(std::string_view line) {
  // VAR = x, VAR := x, VAR ::= x, VAR ?= x, VAR += x, VAR != x, with an
  // optional export/override prefix.
  auto t = trim(line);
  for (std::string_view kw : {"export ", "override ", "private "}) {
    if (t.substr(0, kw.size()) == kw) t = trim(t.substr(kw.size()));
  }
  std::size_t i = 0;
  while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != '=' &&
         t[i] != ':' && t[i] != '?' && t[i] != '+' && t[i] != '!') {
    ++i;
  }
  if (i == 0) return false;
  while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  auto rest = t.substr(i);
  return rest.starts_with("=") || rest.starts_with(":=") || rest.starts_with("::=") ||
         rest.starts_with("?=") || rest.starts_with("+=") || rest.starts_with("!=");
}

// Position of the rule colon, or npos. Ignores colons inside $(...).
std::size_t rule_colon(std::string_view line) {
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '$' && i + 1 < line.size() && (line[i + 1] == '(' || line[i + 1] == '{')) {
      ++depth;
      ++i;
    } else if ((c == ')' || c == '}') && depth > 0) {
      --depth;
    } else if (c == ':' && depth == 0) {
      if (i + 1 < line.size() && line[i + 1] == '=') return std::string_view::npos;
      return i;
    } else if (c == '#' && depth == 0) {
      return std::string_view::npos;
    }
  }
  return std::string_view::npos;
}

bool is_conditional(std::string_view t) {
  for (std::string_view kw : {"ifeq", "ifneq", "ifdef", "ifndef", "else", "endif"}) {
    if (t.substr(0, kw.size()) == kw &&
        (t.size() == kw.size() || std::isspace(static_cast<unsigned char>(t[kw.size()])))) {
      return true;
    }
  }
  return false;
}

// Quoted-string contents on one Gradle line, in order.
std::vector<std::string> quoted_strings(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
    if (c != '\'' && c != '"') {
      ++i;
      continue;
    }
    if (line.substr(i, 3) == "'''" || line.substr(i, 3) == "\"\"\"") break;
    char quote = c;
    std::string value;
    ++i;
    bool closed = false;
    while (i < line.size()) {
      if (line[i] == '\\' && i + 1 < line.size()) {
        value.push_back(line[i + 1]);
        i += 2;
        continue;
      }
      if (line[i] == quote) {
        closed = true;
        ++i;
        break;
      }
      value.push_back(line[i++]);
    }
    if (closed) out.push_back(std::move(value));
  }
  return out;
}

bool opens_exec_block(std::string_view line) {
  auto brace = line.find('{');
  if (brace == std::string_view::npos) return false;
  auto head = line.substr(0, brace);
  if (contains_word(head, "exec") || contains_word(head, "Exec")) return true;
  return false;
}

}  // namespace

ExtractionResult extract_makefile(const TargetRef& target) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  auto lines = split_lines(target->text);
  std::string current_target;
  bool in_rule = false;
  bool in_define = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = strip_cr(lines[i].text);
    std::size_t first = i;
    std::size_t begin = lines[i].offset;

    if (in_define) {
      if (trim(line).starts_with("endef")) in_define = false;
      continue;
    }

    if (!line.empty() && line.front() == '\t') {
      // Recipe line; join continuations.
      std::string joined(line.substr(1));
      while (ends_with_backslash(lines[i].text) && i + 1 < lines.size()) {
        joined.pop_back();  // the backslash
        ++i;
        auto next = strip_cr(lines[i].text);
        if (!next.empty() && next.front() == '\t') next.remove_prefix(1);
        joined += " ";
        joined += next;
      }
      if (!in_rule) continue;
      std::string_view cmd = trim(joined);
      std::string prefix;
      while (!cmd.empty() && (cmd.front() == '@' || cmd.front() == '-' || cmd.front() == '+')) {
        prefix.push_back(cmd.front());
        cmd = trim(cmd.substr(1));
      }
      if (cmd.empty() || cmd.front() == '#') continue;
      auto end = lines[i].offset + strip_cr(lines[i].text).size();
      b.add_command("line " + std::to_string(first + 1) + ", recipe of target '" +
                        current_target + "'",
                    begin, end, std::string(cmd));
      b.last().recipe_prefix = prefix;
      continue;
    }

    auto t = trim(line);
    // Continuation of a non-recipe logical line.
    std::string logical(t);
    while (ends_with_backslash(lines[i].text) && i + 1 < lines.size()) {
      logical.pop_back();
      ++i;
      logical += " ";
      logical += trim(strip_cr(lines[i].text));
    }
    auto lt = trim(logical);
    if (lt.empty() || lt.front() == '#') continue;
    if (lt.starts_with("define ") || lt == "define") {
      in_define = true;
      in_rule = false;
      continue;
    }
    if (is_conditional(lt)) continue;
    if (is_assignment(lt)) {
      in_rule = false;
      continue;
    }
    auto colon = rule_colon(lt);
    if (colon == std::string_view::npos) {
      in_rule = false;
      continue;
    }
    auto targets = trim(lt.substr(0, colon));
    auto space = targets.find_first_of(" \t");
    current_target = std::string(targets.substr(0, space));
    in_rule = true;
    // "target: prereqs ; recipe"
    auto rest = lt.substr(colon + 1);
    if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
    if (auto semi = rest.find(';'); semi != std::string_view::npos) {
      auto cmd = trim(rest.substr(semi + 1));
      if (!cmd.empty()) {
        auto end = lines[i].offset + strip_cr(lines[i].text).size();
        b.add_command("line " + std::to_string(first + 1) + ", recipe of target '" +
                          current_target + "'",
                      begin, end, std::string(cmd));
      }
    }
  }
  return out;
}

ExtractionResult extract_gradle(const TargetRef& target) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  auto lines = split_lines(target->text);
  int exec_depth = 0;  // brace depth inside the innermost exec block, 0 = outside
  std::string block_executable;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = strip_cr(lines[i].text);
    auto t = trim(line);
    if (t.starts_with("//") || t.starts_with("*") || t.starts_with("/*")) continue;

    bool opening = exec_depth == 0 && opens_exec_block(line);
    bool inside = exec_depth > 0 || opening;
    if (opening) block_executable.clear();

    if (inside || contains_word(line, "commandLine")) {
      auto strings = quoted_strings(line);
      if (!strings.empty()) {
        if (contains_word(line, "executable")) block_executable = strings.front();
        if (contains_word(line, "args") && !block_executable.empty() &&
            !contains_word(line, "executable")) {
          strings.insert(strings.begin(), block_executable);
        }
        auto end = lines[i].offset + line.size();
        b.add_argv("line " + std::to_string(i + 1), lines[i].offset, end, std::move(strings));
      }
    }

    if (inside) {
      for (char c : line) {
        if (c == '{') ++exec_depth;
        if (c == '}') --exec_depth;
      }
      if (exec_depth < 0) exec_depth = 0;
    }
  }
  return out;
}

ExtractionResult extract_shellrc(const TargetRef& target) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  auto lines = split_lines(target->text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t first = i;
    std::size_t begin = lines[i].offset;
    std::string joined(strip_cr(lines[i].text));
    while (ends_with_backslash(lines[i].text) && i + 1 < lines.size()) {
      joined.pop_back();
      ++i;
      joined += strip_cr(lines[i].text);
    }
    auto t = trim(joined);
    if (t.empty() || t.front() == '#') continue;
    auto end = lines[i].offset + strip_cr(lines[i].text).size();
    b.add_command("line " + std::to_string(first + 1), begin, end, std::string(t));
  }
  return out;
}

}  // namespace nestguard
