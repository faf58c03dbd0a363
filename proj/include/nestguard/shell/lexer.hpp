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

#ifndef NESTGUARD_SHELL_LEXER_HPP
#define NESTGUARD_SHELL_LEXER_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nestguard::shell {

enum class TokenKind { Word, Operator, Redirection, Newline };

/// A `$( )`, backtick or `<( )` region inside a word. Offsets are into the
/// lexed text; the body excludes the delimiters.
struct Substitution {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t body_begin = 0;
  std::size_t body_end = 0;

  friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct Token {
  TokenKind kind = TokenKind::Word;
  std::string text;  // exact source slice
  std::size_t begin = 0;
  std::size_t end = 0;
  // Word only: quotes and escapes removed. Substitution regions are kept
  // verbatim, since they are not expanded.
  std::string value;
  std::vector<Substitution> substitutions;

  friend bool operator==(const Token&, const Token&) = default;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<std::string> warnings;
};

/// Restricted POSIX-style token recognition. Comments, blanks and
/// backslash-newline continuations are dropped between tokens; an
/// unterminated quote swallows the rest of the input into one word.
LexResult lex_command(std::string_view text);

}  // namespace nestguard::shell

#endif  // NESTGUARD_SHELL_LEXER_HPP
