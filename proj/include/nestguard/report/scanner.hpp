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

#ifndef NESTGUARD_REPORT_SCANNER_HPP
#define NESTGUARD_REPORT_SCANNER_HPP

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nestguard/core/model.hpp"
#include "nestguard/doc/doc_analysis.hpp"
#include "nestguard/extract/extractors.hpp"

namespace nestguard::report {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything the rule-config file can change.
struct RuleConfig {
  RuleSettings settings;
  doc::Lexicons lexicons = doc::Lexicons::defaults();
  ExtractorOptions extractor;
  std::vector<std::string> context_tokens;
};

/// Top-level keys are either rule ids mapping to {"enabled", "severity"} or
/// one of the list keys below, whose entries extend the defaults:
/// imperatives, command_words, fetch_words, sensitive_files,
/// domain_allowlist, context_tokens, settings_command_keys, launch_keys.
RuleConfig parse_rule_config(std::string_view json_text);
RuleConfig load_rule_config(const std::filesystem::path& path);

struct ScanOptions {
  bool include_docs = false;
  RuleConfig config;
};

struct ScanResult {
  std::vector<Finding> findings;
  std::vector<Warning> warnings;
  std::size_t targets_scanned = 0;
  std::size_t surfaces_analyzed = 0;
  std::vector<ExecutionSurface> surfaces;  // analysed ones, discovery order
  std::vector<std::string> context_tokens;
};

/// Discovery, extraction and every rule module over `root`. Throws
/// ScanRootError when the root cannot be read.
ScanResult scan_tree(const std::filesystem::path& root, const ScanOptions& options);

/// Lookalike context: the root directory name plus names found in configs.
std::vector<std::string> gather_context_tokens(const std::filesystem::path& root,
                                               const std::vector<std::string>& names,
                                               const std::vector<std::string>& extra);

}  // namespace nestguard::report

#endif  // NESTGUARD_REPORT_SCANNER_HPP
