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

#ifndef NESTGUARD_EXTRACT_EXTRACTORS_HPP
#define NESTGUARD_EXTRACT_EXTRACTORS_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nestguard/core/model.hpp"
#include "nestguard/core/text.hpp"
#include "nestguard/extract/json_reader.hpp"

namespace nestguard {

struct ScanTarget {
  std::filesystem::path path;
  std::string relative_path;  // '/'-separated, relative to the scan root
  ConfigFormat format = ConfigFormat::Unknown;
  std::string raw;   // file bytes as read
  std::string text;  // lossy UTF-8 decode of `raw`
  std::size_t invalid_sequences = 0;
  std::optional<std::size_t> first_invalid_offset;
  LineIndex lines{std::string_view{}};

  /// Builds a target from in-memory bytes (decodes and indexes them).
  static std::shared_ptr<const ScanTarget> from_bytes(std::string relative_path,
                                                      ConfigFormat format,
                                                      std::string raw,
                                                      std::filesystem::path path = {});
};

using TargetRef = std::shared_ptr<const ScanTarget>;

struct ExecutionSurface {
  TargetRef target;
  Locator locator;
  std::string command_text;
  // Present when the format separates program and arguments.
  std::optional<std::vector<std::string>> argv;
  // True when command_text is handed to a shell; false when argv is
  // exec'd directly.
  bool shell_semantics = true;
  // Cross-references (launch.json preLaunchTask) are reported but never
  // analysed as commands.
  bool advisory_only = false;
  // Makefile recipe prefixes (@, -, +) stripped from command_text.
  std::string recipe_prefix;
  TriggerClass trigger = TriggerClass::McpServerStartup;
  ImpactScope impact;
};

struct Warning {
  std::string path;
  std::string message;

  friend bool operator==(const Warning&, const Warning&) = default;
};

struct ExtractionResult {
  std::vector<ExecutionSurface> surfaces;
  std::vector<Warning> warnings;
  // Set when the document could not be parsed; surfaces is then empty.
  std::optional<std::string> parse_error;
  SourceSpan error_span;
  // Names worth treating as lookalike-domain context (MCP server names,
  // package names).
  std::vector<std::string> context_names;
};

/// User-extensible key lexicons for the VS Code formats.
struct ExtractorOptions {
  std::vector<std::string> extra_settings_command_keys;
  std::vector<std::string> extra_launch_keys;
};

class ScanRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiscoveryResult {
  std::vector<TargetRef> targets;
  std::vector<Warning> warnings;
};

/// Recursive, path-sorted walk of `root`. Skips `.git` directories,
/// symlinks and paths matched by `<root>/.nestguardignore`. Throws
/// ScanRootError when the root itself cannot be read.
DiscoveryResult discover_targets(const std::filesystem::path& root, bool include_docs);

/// Dispatches to the per-format extractor. Malformed documents yield a
/// parse_error and no surfaces, never an exception.
ExtractionResult extract_surfaces(const TargetRef& target,
                                  const ExtractorOptions& options = {});

ExtractionResult extract_mcp(const TargetRef& target, const JsonValue& document);
ExtractionResult extract_devcontainer(const TargetRef& target, const JsonValue& document);
ExtractionResult extract_tasks(const TargetRef& target, const JsonValue& document);
ExtractionResult extract_launch(const TargetRef& target, const JsonValue& document,
                                const ExtractorOptions& options = {});
ExtractionResult extract_settings(const TargetRef& target, const JsonValue& document,
                                  const ExtractorOptions& options = {});
ExtractionResult extract_workflow(const TargetRef& target);
ExtractionResult extract_makefile(const TargetRef& target);
ExtractionResult extract_pyproject(const TargetRef& target);
ExtractionResult extract_pom(const TargetRef& target);
ExtractionResult extract_gradle(const TargetRef& target);
ExtractionResult extract_shellrc(const TargetRef& target);

}  // namespace nestguard

#endif  // NESTGUARD_EXTRACT_EXTRACTORS_HPP
