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

#include <algorithm>
#include <cctype>

#include "nestguard/shell/ast.hpp"

namespace nestguard::shell {
namespace {

// Substitutions nested deeper than this are left unparsed.
constexpr int kMaxSubstitutionDepth = 16;

CommandAst parse_impl(std::string_view source, const LexResult& lexed, bool in_substitution,
                      int depth);

CommandAst parse_text_impl(std::string_view text, bool in_substitution, int depth) {
  return parse_impl(text, lex_command(text), in_substitution, depth);
}

Connector connector_for(std::string_view op) {
  if (op == "&&") return Connector::And;
  if (op == "||") return Connector::Or;
  if (op == "|" || op == "|&") return Connector::Pipe;
  if (op == "&") return Connector::Background;
  return Connector::Seq;
}

Redirection split_redirection(const Token& t) {
  Redirection r;
  r.begin = t.begin;
  r.end = t.end;
  std::size_t i = 0;
  while (i < t.text.size() && std::isdigit(static_cast<unsigned char>(t.text[i]))) ++i;
  if (i > 0) r.fd = std::stoi(t.text.substr(0, std::min<std::size_t>(i, 9)));
  std::size_t j = i;
  while (j < t.text.size() && std::string_view("<>&|").find(t.text[j]) != std::string_view::npos) {
    ++j;
  }
  r.op = t.text.substr(i, j - i);
  r.target = t.text.substr(j);
  return r;
}

class Parser {
 public:
  Parser(std::string_view source, const LexResult& lexed, bool in_substitution, int depth)
      : source_(source), lexed_(lexed), in_substitution_(in_substitution), depth_(depth) {}

  CommandAst run() {
    ast_.source = std::string(source_);
    ast_.warnings = lexed_.warnings;
    const auto& toks = lexed_.tokens;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const Token& t = toks[i];
      switch (t.kind) {
        case TokenKind::Word:
          cur_.words.push_back({t.value, t.text, t.begin, t.end});
          extend(t);
          substitutions(t);
          break;
        case TokenKind::Redirection: {
          Redirection r = split_redirection(t);
          extend(t);
          if (r.target.empty() && i + 1 < toks.size() && toks[i + 1].kind == TokenKind::Word) {
            const Token& target = toks[++i];
            r.target = target.value;
            r.end = target.end;
            extend(target);
            substitutions(target);
          }
          cur_.redirections.push_back(std::move(r));
          break;
        }
        case TokenKind::Operator:
          if (t.text == "(" || t.text == ")") break;
          flush(connector_for(t.text));
          break;
        case TokenKind::Newline:
          flush(Connector::Seq);
          break;
      }
    }
    flush(Connector::None);
    if (!ast_.segments.empty() && ast_.segments.back().connector_to_next == Connector::Seq) {
      ast_.segments.back().connector_to_next = Connector::None;
    }
    return std::move(ast_);
  }

 private:
  void extend(const Token& t) {
    if (!started_) {
      cur_.begin = t.begin;
      started_ = true;
    }
    cur_.end = t.end;
  }

  void substitutions(const Token& t) {
    for (const auto& sub : t.substitutions) {
      if (depth_ >= kMaxSubstitutionDepth) {
        ast_.warnings.push_back("command substitution nested too deeply; not analysed");
        return;
      }
      auto body = source_.substr(sub.body_begin, sub.body_end - sub.body_begin);
      CommandAst nested = parse_text_impl(body, true, depth_ + 1);
      for (auto& w : nested.warnings) ast_.warnings.push_back(std::move(w));
      nested.warnings.clear();
      cur_.substitutions.push_back(std::move(nested));
    }
  }

  void flush(Connector connector) {
    if (cur_.words.empty() && cur_.redirections.empty()) {
      cur_ = Segment{};
      started_ = false;
      return;
    }
    cur_.connector_to_next = connector;
    cur_.is_exec_prefixed =
        !in_substitution_ && !cur_.words.empty() && cur_.words.front().value == "exec";
    ast_.segments.push_back(std::move(cur_));
    cur_ = Segment{};
    started_ = false;
  }

  std::string_view source_;
  const LexResult& lexed_;
  bool in_substitution_;
  int depth_;
  CommandAst ast_;
  Segment cur_;
  bool started_ = false;
};

CommandAst parse_impl(std::string_view source, const LexResult& lexed, bool in_substitution,
                      int depth) {
  return Parser(source, lexed, in_substitution, depth).run();
}

bool is_assignment_word(std::string_view w) {
  auto eq = w.find('=');
  if (eq == std::string_view::npos || eq == 0) return false;
  if (std::isdigit(static_cast<unsigned char>(w.front()))) return false;
  return std::all_of(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(eq), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

std::vector<std::string> Segment::argv() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.value);
  return out;
}

CommandAst parse_command(std::string_view source, const LexResult& lexed, bool in_substitution) {
  return parse_impl(source, lexed, in_substitution, 0);
}

CommandAst parse_text(std::string_view text, bool in_substitution) {
  return parse_text_impl(text, in_substitution, 0);
}

CommandAst ast_from_argv(const std::vector<std::string>& argv) {
  CommandAst ast;
  Segment seg;
  for (const auto& a : argv) {
    if (!ast.source.empty()) ast.source.push_back(' ');
    std::size_t b = ast.source.size();
    ast.source += a;
    seg.words.push_back({a, a, b, ast.source.size()});
  }
  if (seg.words.empty()) return ast;
  seg.end = ast.source.size();
  seg.is_exec_prefixed = seg.words.front().value == "exec";
  ast.segments.push_back(std::move(seg));
  return ast;
}

std::optional<std::size_t> command_index(const Segment& segment) {
  const auto& w = segment.words;
  std::size_t i = 0;
  while (i < w.size()) {
    const auto& v = w[i].value;
    if (v == "exec" || v == "nohup" || v == "command" || v == "builtin" || v == "setsid" ||
        v == "time" || is_assignment_word(v)) {
      ++i;
    } else if (v == "sudo" || v == "doas") {
      ++i;
      while (i < w.size() && w[i].value.starts_with("-")) {
        // Options taking a value.
        const auto& o = w[i].value;
        bool takes_value = o == "-u" || o == "-g" || o == "-C" || o == "-h" || o == "-p";
        i += takes_value ? 2 : 1;
      }
    } else {
      return i;
    }
  }
  return std::nullopt;
}

std::string command_name(const Segment& segment) {
  auto idx = command_index(segment);
  if (!idx) return {};
  const auto& v = segment.words[*idx].value;
  auto slash = v.find_last_of('/');
  return slash == std::string::npos ? v : v.substr(slash + 1);
}

const CommandAst& effective_ast(const CommandAst& ast) {
  const CommandAst* cur = &ast;
  while (cur->segments.size() == 1 && cur->segments.front().wrapper &&
         cur->segments.front().wrapper->inline_script) {
    cur = cur->segments.front().wrapper->inline_script.get();
  }
  return *cur;
}

namespace {

void collect_units(const CommandAst& ast, std::vector<const CommandAst*>& out) {
  out.push_back(&ast);
  for (const auto& seg : ast.segments) {
    for (const auto& sub : seg.substitutions) collect_units(sub, out);
    if (seg.wrapper && seg.wrapper->inline_script) collect_units(*seg.wrapper->inline_script, out);
  }
}

}  // namespace

std::vector<const CommandAst*> all_units(const CommandAst& ast) {
  std::vector<const CommandAst*> out;
  collect_units(ast, out);
  return out;
}

}  // namespace nestguard::shell
