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

#include <optional>
#include <string>

#include "nestguard/shell/ast.hpp"

namespace nestguard::shell {
namespace {

bool is_shell_name(std::string_view name) {
  return name == "sh" || name == "bash" || name == "zsh" || name == "dash" || name == "ksh" ||
         name == "ash";
}

bool looks_like_assignment(std::string_view w) {
  auto eq = w.find('=');
  return eq != std::string_view::npos && eq > 0 && !w.starts_with("-");
}

struct Unwrapped {
  WrapperKind kind;
  std::string interpreter_word;
  CommandAst inner;
};

std::optional<Unwrapped> unwrap(const Segment& seg, const CommandAst& parent) {
  auto idx = command_index(seg);
  if (!idx) return std::nullopt;
  const auto& words = seg.words;
  std::string name = command_name(seg);

  if (is_shell_name(name)) {
    bool inline_flag = false;
    std::size_t k = *idx + 1;
    for (; k < words.size(); ++k) {
      const auto& w = words[k].value;
      if (w == "--" || w == "-") {
        ++k;
        break;
      }
      if (w.size() < 2 || (w[0] != '-' && w[0] != '+')) break;
      // Anything beyond flag letters is the script itself.
      if (w.find_first_not_of("-+abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ") !=
          std::string::npos) {
        break;
      }
      if (w.starts_with("--")) continue;
      if (w[0] == '-' && w.find('c') != std::string::npos) inline_flag = true;
      // -o/+o take an option name.
      if (w == "-o" || w == "+o" || w == "-O" || w == "+O") ++k;
    }
    if (!inline_flag || k >= words.size()) return std::nullopt;
    return Unwrapped{WrapperKind::ShellInline, words[*idx].value, parse_text(words[k].value)};
  }

  if (name == "env") {
    std::size_t k = *idx + 1;
    while (k < words.size()) {
      const auto& w = words[k].value;
      if (w == "--") {
        ++k;
        break;
      }
      if (w == "-u" || w == "--unset" || w == "-C" || w == "--chdir") {
        k += 2;
      } else if (w.starts_with("-") || looks_like_assignment(w)) {
        ++k;
      } else {
        break;
      }
    }
    if (k >= words.size()) return std::nullopt;
    CommandAst inner;
    inner.source = parent.source;
    Segment s;
    s.words.assign(words.begin() + static_cast<std::ptrdiff_t>(k), words.end());
    s.substitutions = seg.substitutions;
    s.begin = s.words.front().begin;
    s.end = seg.end;
    s.is_exec_prefixed = s.words.front().value == "exec";
    inner.segments.push_back(std::move(s));
    return Unwrapped{WrapperKind::Env, words[*idx].value, std::move(inner)};
  }
  return std::nullopt;
}

// nullopt when the wrapper chain is deeper than the cap.
std::optional<CommandAst> flatten(const CommandAst& ast, int depth) {
  CommandAst out = ast;
  for (auto& seg : out.segments) {
    for (auto& sub : seg.substitutions) {
      auto flat = flatten(sub, depth);
      if (!flat) return std::nullopt;
      sub = std::move(*flat);
    }
    auto un = unwrap(seg, out);
    if (!un) continue;
    if (depth + 1 > kMaxWrapperDepth) return std::nullopt;
    auto inner = flatten(un->inner, depth + 1);
    if (!inner) return std::nullopt;
    for (auto& w : inner->warnings) out.warnings.push_back(w);
    inner->warnings.clear();
    seg.wrapper = Wrapper{un->kind, un->interpreter_word,
                          std::make_shared<const CommandAst>(std::move(*inner))};
  }
  return out;
}

}  // namespace

CommandAst flatten_wrappers(const CommandAst& ast) {
  if (auto flat = flatten(ast, 0)) return std::move(*flat);
  CommandAst out = ast;
  out.warnings.push_back("interpreter wrappers nested more than " +
                         std::to_string(kMaxWrapperDepth) +
                         " levels deep; analysing the outer command only");
  return out;
}

}  // namespace nestguard::shell
