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

#ifndef NESTGUARD_SHELL_AST_HPP
#define NESTGUARD_SHELL_AST_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nestguard/shell/lexer.hpp"

namespace nestguard::shell {

enum class Connector { None, And, Or, Seq, Pipe, Background };

struct Word {
  std::string value;  // quote-resolved
  std::string raw;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Redirection {
  std::optional<int> fd;
  std::string op;  // ">", ">>", ">&", "<", "&>", ...
  std::string target;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct CommandAst;

enum class WrapperKind {
  ShellInline,  // sh -c S
  Env,          // env [opts] [NAME=VAL...] CMD...
};

struct Wrapper {
  WrapperKind kind = WrapperKind::ShellInline;
  std::string interpreter_word;
  std::shared_ptr<const CommandAst> inline_script;
};

struct Segment {
  std::vector<Word> words;
  std::vector<Redirection> redirections;
  Connector connector_to_next = Connector::None;
  std::vector<CommandAst> substitutions;
  bool is_exec_prefixed = false;
  std::optional<Wrapper> wrapper;
  // Span of the segment in CommandAst::source.
  std::size_t begin = 0;
  std::size_t end = 0;

  std::vector<std::string> argv() const;
};

struct CommandAst {
  std::string source;
  std::vector<Segment> segments;
  std::vector<std::string> warnings;
};

/// Groups tokens of `source` (as produced by lex_command) into segments.
/// Substitution bodies are parsed recursively; `exec` inside them never
/// marks a segment as exec-prefixed.
CommandAst parse_command(std::string_view source, const LexResult& lexed,
                         bool in_substitution = false);

/// lex_command followed by parse_command; lexer warnings are carried over.
CommandAst parse_text(std::string_view text, bool in_substitution = false);

/// A single segment whose words are `argv` verbatim (no shell involved).
CommandAst ast_from_argv(const std::vector<std::string>& argv);

inline constexpr int kMaxWrapperDepth = 8;

/// Records sh/bash/zsh -c and env wrappers on each segment, parsing inline
/// scripts recursively. Past kMaxWrapperDepth nested wrappers the input is
/// returned unflattened with a warning.
CommandAst flatten_wrappers(const CommandAst& ast);

/// Descends through single-segment wrappers to the innermost script.
const CommandAst& effective_ast(const CommandAst& ast);

/// `ast` and every AST nested in it (substitutions, inline scripts),
/// depth first.
std::vector<const CommandAst*> all_units(const CommandAst& ast);

/// Index of the word naming the program once prefixes such as exec,
/// NAME=VAL, nohup, sudo and time are skipped; nullopt when none is left.
std::optional<std::size_t> command_index(const Segment& segment);

/// Basename of the program word, or "" when there is none.
std::string command_name(const Segment& segment);

}  // namespace nestguard::shell

#endif  // NESTGUARD_SHELL_AST_HPP
