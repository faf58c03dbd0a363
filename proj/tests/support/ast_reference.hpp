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

#ifndef NESTGUARD_TESTS_SUPPORT_AST_REFERENCE_HPP
#define NESTGUARD_TESTS_SUPPORT_AST_REFERENCE_HPP

// Converts a production AST into the reference tokenizer's segment shape so
// the two can be compared.

#include <string>
#include <vector>

#include "nestguard/shell/ast.hpp"
#include "support/shell_oracle.hpp"

namespace nestguard::test {

inline std::string connector_text(shell::Connector c) {
  switch (c) {
    case shell::Connector::And: return "&&";
    case shell::Connector::Or: return "||";
    case shell::Connector::Seq: return ";";
    case shell::Connector::Pipe: return "|";
    case shell::Connector::Background: return "&";
    case shell::Connector::None: return "";
  }
  return "?";
}

inline std::vector<oracle::RefSegment> as_reference(const shell::CommandAst& ast) {
  std::vector<oracle::RefSegment> out;
  for (const auto& seg : ast.segments) {
    oracle::RefSegment r;
    r.argv = seg.argv();
    for (const auto& red : seg.redirections) {
      std::string op = (red.fd ? std::to_string(*red.fd) : "") + red.op;
      r.redirects.push_back({op, red.target});
    }
    r.connector = connector_text(seg.connector_to_next);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nestguard::test

#endif  // NESTGUARD_TESTS_SUPPORT_AST_REFERENCE_HPP
