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

#ifndef NESTGUARD_CORE_MODEL_HPP
#define NESTGUARD_CORE_MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nestguard {

enum class ConfigFormat {
  McpJson,
  VsCodeTasks,
  VsCodeLaunch,
  VsCodeSettings,
  DevContainer,
  GithubWorkflow,
  Makefile,
  PyProject,
  MavenPom,
  GradleBuild,
  ShellRc,
  MarkdownDoc,
  HtmlDoc,
  Unknown,
};

/// When the host tool runs a command found in a configuration file.
enum class TriggerClass {
  McpServerStartup,
  IdeTaskRun,
  DebugLaunch,
  IdeSettingsAutomation,
  ContainerLifecycle,
  CiEvent,
  BuildInvocation,
  PackageInstall,
  ShellSessionStart,
};

/// Whether a compromised file endangers the local machine (pc), spreads
/// through shared repositories (oss), or both.
struct ImpactScope {
  bool pc = false;
  bool oss = false;

  friend bool operator==(const ImpactScope&, const ImpactScope&) = default;
};

enum class AttackStage {
  Stage1aSourceManipulation,
  Stage1bPayloadInjection,
  Stage2Persistence,
};

enum class Severity { Info, Low, Medium, High, Critical };

enum class RuleCategory { Command, Documentation };

struct FormatProfile {
  ConfigFormat format;
  std::vector<std::string> filename_globs;
  TriggerClass trigger;
  ImpactScope impact;
};

struct Rule {
  std::string id;
  RuleCategory category;
  AttackStage stage;
  Severity default_severity;
  std::string title;
  std::string remediation;
  bool enabled = true;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Half-open byte range plus 1-based line/column of both ends.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t end_line = 0;
  std::size_t end_column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Where a surface or finding lives: a structural path inside the document
/// ("servers/Name/args/1", "recipe of target 'all'") plus the byte span.
struct Locator {
  std::string path;
  SourceSpan span;

  friend bool operator==(const Locator&, const Locator&) = default;
};

struct Finding {
  std::string rule_id;
  Severity severity = Severity::Info;
  AttackStage stage = AttackStage::Stage1bPayloadInjection;
  std::string target_path;
  Locator locator;
  // Literal substring of the scanned file's decoded text, at most
  // kMaxEvidenceBytes long.
  std::string evidence;
  bool evidence_truncated = false;
  std::string message;
  ImpactScope impact;
  std::string remediation;
  std::optional<TriggerClass> trigger;

  friend bool operator==(const Finding&, const Finding&) = default;
};

inline constexpr std::size_t kMaxEvidenceBytes = 200;

class NoImpactProfile : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Rule ids. Stable across versions; reports and baselines key on them.
namespace rule_ids {
inline constexpr std::string_view kChainedExecution = "R1-CHAINED-EXEC";
inline constexpr std::string_view kExecStealth = "R2-EXEC-STEALTH";
inline constexpr std::string_view kReverseShell = "R3-REVERSE-SHELL";
inline constexpr std::string_view kFetchExecute = "R4-FETCH-EXECUTE";
inline constexpr std::string_view kDecodeExecute = "R5-DECODE-EXECUTE";
inline constexpr std::string_view kInterpreterWrapper = "R6-INTERPRETER-WRAPPER";
inline constexpr std::string_view kPersistenceTrigger = "R7-PERSISTENCE-TRIGGER";
inline constexpr std::string_view kInvisibleUnicode = "D1-INVISIBLE-UNICODE";
inline constexpr std::string_view kHiddenInstruction = "D2-HIDDEN-INSTRUCTION";
inline constexpr std::string_view kLookalikeDomain = "D3-LOOKALIKE-DOMAIN";
inline constexpr std::string_view kConfigWriteInstruction = "D4-CONFIG-WRITE-INSTRUCTION";
inline constexpr std::string_view kStealthConfirmed = "H1-STEALTH-CONFIRMED";
inline constexpr std::string_view kUnanalyzableConfig = "X1-UNANALYZABLE-CONFIG";
}  // namespace rule_ids

/// The eleven executable-configuration profiles, in a stable order.
std::span<const FormatProfile> builtin_profiles();

/// Profile for a non-document format. Throws NoImpactProfile otherwise.
const FormatProfile& profile_for(ConfigFormat format);

ImpactScope classify_impact(ConfigFormat format);

/// Every rule the scanner can emit, sorted by id.
std::span<const Rule> rule_registry();

/// nullptr when the id is not registered.
const Rule* find_rule(std::string_view id);

/// Format whose profile globs match `relative_path`, or Unknown.
ConfigFormat match_profile(std::string_view relative_path);

bool is_document_format(ConfigFormat format);

/// Triggers that fire without a deliberate user action on the file itself.
bool is_automatic_trigger(TriggerClass trigger);

std::string_view to_string(ConfigFormat format);
std::string_view to_string(TriggerClass trigger);
std::string_view to_string(AttackStage stage);
std::string_view to_string(Severity severity);
std::string_view to_string(RuleCategory category);

/// Human wording used in R7 evidence, e.g. "MCP server startup".
std::string_view describe_trigger(TriggerClass trigger);

/// Short stage tag for text output, e.g. "Stage 2 - persistence".
std::string_view describe_stage(AttackStage stage);

/// Case-insensitive; accepts "info".."critical".
std::optional<Severity> parse_severity(std::string_view text);

Severity escalate(Severity severity);

/// Per-rule enable flag and severity, starting from the registry defaults.
class RuleSettings {
 public:
  RuleSettings();

  bool enabled(std::string_view id) const;
  Severity severity(std::string_view id) const;

  /// Both throw std::invalid_argument for unknown ids.
  void set_enabled(std::string_view id, bool enabled);
  void set_severity(std::string_view id, Severity severity);

 private:
  struct Entry {
    bool enabled;
    Severity severity;
  };
  Entry& entry(std::string_view id);
  const Entry* find(std::string_view id) const;

  std::vector<std::pair<std::string, Entry>> entries_;  // sorted by id
};

}  // namespace nestguard

#endif  // NESTGUARD_CORE_MODEL_HPP
