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

#ifndef NESTGUARD_SHELL_RULES_HPP
#define NESTGUARD_SHELL_RULES_HPP

#include <string>
#include <vector>

#include "nestguard/core/model.hpp"
#include "nestguard/extract/extractors.hpp"
#include "nestguard/shell/ast.hpp"

namespace nestguard::shell {

/// One detector match before it is anchored in the scanned file.
struct CommandHit {
  std::string rule_id;
  std::string excerpt;  // command text the match is about
  std::string message;
};

/// The surface's command as a flattened AST: lexed when it goes through a
/// shell, built from argv otherwise. Invisible codepoints are removed first.
CommandAst surface_ast(const ExecutionSurface& surface);

/// Surfaces whose host promises to start exactly one program.
bool is_single_launch_context(const ExecutionSurface& surface);

// R1
std::vector<CommandHit> detect_chained_execution(const ExecutionSurface& surface,
                                                 const CommandAst& effective);
// R2–R5 look at one AST level; callers walk all_units().
std::vector<CommandHit> detect_exec_stealth(const CommandAst& unit);
std::vector<CommandHit> detect_reverse_shell(const CommandAst& unit);
std::vector<CommandHit> detect_fetch_execute(const CommandAst& unit);
std::vector<CommandHit> detect_decode_execute(const CommandAst& unit);
// R6; `root` is the flattened, not the effective, AST.
std::vector<CommandHit> detect_interpreter_wrapper(const ExecutionSurface& surface,
                                                   const CommandAst& root);

/// R7: on automatic triggers, escalates the R2–R5 findings in place and
/// returns the persistence finding (empty otherwise).
std::vector<Finding> detect_persistence_trigger(const ExecutionSurface& surface,
                                                std::vector<Finding>& findings,
                                                const RuleSettings& settings);

struct SurfaceAnalysis {
  std::vector<Finding> findings;  // rule id order
  std::vector<std::string> warnings;
};

SurfaceAnalysis analyze_surface(const ExecutionSurface& surface,
                                const RuleSettings& settings = RuleSettings{});

}  // namespace nestguard::shell

#endif  // NESTGUARD_SHELL_RULES_HPP
