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

#include "nestguard/core/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "nestguard/core/glob.hpp"

namespace nestguard {
namespace {

const std::vector<FormatProfile>& profiles() {
  static const std::vector<FormatProfile> kProfiles = {
      {ConfigFormat::McpJson,
       {"**/mcp.json", "**/.mcp.json"},
       TriggerClass::McpServerStartup,
       {.pc = true, .oss = true}},
      {ConfigFormat::VsCodeTasks,
       {"**/tasks.json"},
       TriggerClass::IdeTaskRun,
       {.pc = true, .oss = false}},
      {ConfigFormat::VsCodeLaunch,
       {"**/launch.json"},
       TriggerClass::DebugLaunch,
       {.pc = true, .oss = false}},
      {ConfigFormat::VsCodeSettings,
       {"**/settings.json"},
       TriggerClass::IdeSettingsAutomation,
       {.pc = true, .oss = false}},
      // Local-only and shared-repo copies of this file behave alike, so one
      // profile carries both scopes.
      {ConfigFormat::DevContainer,
       {"**/devcontainer.json", "**/.devcontainer.json"},
       TriggerClass::ContainerLifecycle,
       {.pc = true, .oss = true}},
      {ConfigFormat::GithubWorkflow,
       {"**/.github/workflows/*.yml", "**/.github/workflows/*.yaml"},
       TriggerClass::CiEvent,
       {.pc = false, .oss = true}},
      {ConfigFormat::Makefile,
       {"**/Makefile", "**/makefile", "**/GNUmakefile", "**/*.mk"},
       TriggerClass::BuildInvocation,
       {.pc = true, .oss = true}},
      {ConfigFormat::PyProject,
       {"**/pyproject.toml"},
       TriggerClass::PackageInstall,
       {.pc = true, .oss = true}},
      {ConfigFormat::MavenPom,
       {"**/pom.xml"},
       TriggerClass::BuildInvocation,
       {.pc = true, .oss = true}},
      {ConfigFormat::GradleBuild,
       {"**/build.gradle", "**/build.gradle.kts"},
       TriggerClass::BuildInvocation,
       {.pc = true, .oss = true}},
      {ConfigFormat::ShellRc,
       {"**/.bashrc", "**/.zshrc", "**/.profile", "**/.bash_profile"},
       TriggerClass::ShellSessionStart,
       {.pc = true, .oss = false}},
  };
  return kProfiles;
}

// Sorted by id.
const std::vector<Rule>& rules() {
  using enum AttackStage;
  using enum Severity;
  static const std::vector<Rule> kRules = [] {
    std::vector<Rule> r = {
        {"D1-INVISIBLE-UNICODE", RuleCategory::Documentation,
         Stage1aSourceManipulation, Medium,
         "Invisible or direction-altering Unicode characters",
         "Remove zero-width, bidi-control and tag characters; review the text "
         "as the agent sees it."},
        {"D2-HIDDEN-INSTRUCTION", RuleCategory::Documentation,
         Stage1aSourceManipulation, Medium,
         "Agent-directed instruction hidden in non-rendered content",
         "Delete the hidden region or move the instruction into visible, "
         "reviewed text."},
        {"D3-LOOKALIKE-DOMAIN", RuleCategory::Documentation,
         Stage1aSourceManipulation, Low,
         "URL host mimics a project or server name",
         "Verify the domain belongs to the upstream project before fetching "
         "from it."},
        {"D4-CONFIG-WRITE-INSTRUCTION", RuleCategory::Documentation,
         Stage1aSourceManipulation, Low,
         "Instruction to write shell code into an executable config file",
         "Compare the snippet against the upstream documentation before "
         "letting an agent apply it."},
        {"H1-STEALTH-CONFIRMED", RuleCategory::Command, Stage2Persistence,
         Critical,
         "Startup command has side effects yet completes the MCP handshake",
         "Remove everything except the server launch from the startup "
         "command and rotate any exposed credentials."},
        {"R1-CHAINED-EXEC", RuleCategory::Command, Stage1bPayloadInjection,
         High, "Extra commands chained into a single-launch command field",
         "Keep only the program invocation in this field; move setup steps "
         "into a reviewed script."},
        {"R2-EXEC-STEALTH", RuleCategory::Command, Stage2Persistence, High,
         "Payload hidden ahead of an exec into the legitimate program",
         "Remove the segments before `exec`; the legitimate program should "
         "be launched directly."},
        {"R3-REVERSE-SHELL", RuleCategory::Command, Stage1bPayloadInjection,
         Critical, "Reverse shell to a network endpoint",
         "Remove the command, block the endpoint and treat the machine as "
         "compromised."},
        {"R4-FETCH-EXECUTE", RuleCategory::Command, Stage2Persistence,
         Critical, "Remote content downloaded and executed",
         "Pin and vendor the script, or verify its checksum before running "
         "it."},
        {"R5-DECODE-EXECUTE", RuleCategory::Command, Stage1bPayloadInjection,
         High, "Encoded payload decoded and executed",
         "Decode the payload offline, review it and replace it with plain "
         "commands."},
        {"R6-INTERPRETER-WRAPPER", RuleCategory::Command,
         Stage1bPayloadInjection, Medium,
         "Shell interpreter wraps a command where a program is expected",
         "Launch the server binary directly instead of through `sh -c`."},
        {"R7-PERSISTENCE-TRIGGER", RuleCategory::Command, Stage2Persistence,
         High, "Malicious command re-executes on an automatic trigger",
         "Remove the command from the file; it runs again every time the "
         "trigger fires."},
        {"X1-UNANALYZABLE-CONFIG", RuleCategory::Command,
         Stage1bPayloadInjection, Medium, "Unanalyzable executable config",
         "Fix the syntax so the file can be reviewed; tools may still "
         "execute it."},
    };
    std::sort(r.begin(), r.end(),
              [](const Rule& a, const Rule& b) { return a.id < b.id; });
    return r;
  }();
  return kRules;
}

char ascii_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

std::span<const FormatProfile> builtin_profiles() { return profiles(); }

const FormatProfile& profile_for(ConfigFormat format) {
  for (const auto& p : profiles()) {
    if (p.format == format) return p;
  }
  throw NoImpactProfile("no impact profile for format " +
                        std::string(to_string(format)));
}

ImpactScope classify_impact(ConfigFormat format) {
  return profile_for(format).impact;
}

std::span<const Rule> rule_registry() { return rules(); }

const Rule* find_rule(std::string_view id) {
  for (const auto& r : rules()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

ConfigFormat match_profile(std::string_view relative_path) {
  for (const auto& p : profiles()) {
    for (const auto& g : p.filename_globs) {
      if (glob_match(g, relative_path)) return p.format;
    }
  }
  return ConfigFormat::Unknown;
}

bool is_document_format(ConfigFormat format) {
  return format == ConfigFormat::MarkdownDoc || format == ConfigFormat::HtmlDoc;
}

bool is_automatic_trigger(TriggerClass trigger) {
  switch (trigger) {
    case TriggerClass::McpServerStartup:
    case TriggerClass::ContainerLifecycle:
    case TriggerClass::CiEvent:
    case TriggerClass::ShellSessionStart:
    case TriggerClass::PackageInstall:
    case TriggerClass::BuildInvocation:
      return true;
    case TriggerClass::IdeTaskRun:
    case TriggerClass::DebugLaunch:
    case TriggerClass::IdeSettingsAutomation:
      return false;
  }
  return false;
}

std::string_view to_string(ConfigFormat format) {
  switch (format) {
    case ConfigFormat::McpJson: return "McpJson";
    case ConfigFormat::VsCodeTasks: return "VsCodeTasks";
    case ConfigFormat::VsCodeLaunch: return "VsCodeLaunch";
    case ConfigFormat::VsCodeSettings: return "VsCodeSettings";
    case ConfigFormat::DevContainer: return "DevContainer";
    case ConfigFormat::GithubWorkflow: return "GithubWorkflow";
    case ConfigFormat::Makefile: return "Makefile";
    case ConfigFormat::PyProject: return "PyProject";
    case ConfigFormat::MavenPom: return "MavenPom";
    case ConfigFormat::GradleBuild: return "GradleBuild";
    case ConfigFormat::ShellRc: return "ShellRc";
    case ConfigFormat::MarkdownDoc: return "MarkdownDoc";
    case ConfigFormat::HtmlDoc: return "HtmlDoc";
    case ConfigFormat::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(TriggerClass trigger) {
  switch (trigger) {
    case TriggerClass::McpServerStartup: return "McpServerStartup";
    case TriggerClass::IdeTaskRun: return "IdeTaskRun";
    case TriggerClass::DebugLaunch: return "DebugLaunch";
    case TriggerClass::IdeSettingsAutomation: return "IdeSettingsAutomation";
    case TriggerClass::ContainerLifecycle: return "ContainerLifecycle";
    case TriggerClass::CiEvent: return "CiEvent";
    case TriggerClass::BuildInvocation: return "BuildInvocation";
    case TriggerClass::PackageInstall: return "PackageInstall";
    case TriggerClass::ShellSessionStart: return "ShellSessionStart";
  }
  return "";
}

std::string_view describe_trigger(TriggerClass trigger) {
  switch (trigger) {
    case TriggerClass::McpServerStartup: return "MCP server startup";
    case TriggerClass::IdeTaskRun: return "IDE task run";
    case TriggerClass::DebugLaunch: return "debug launch";
    case TriggerClass::IdeSettingsAutomation: return "IDE settings automation";
    case TriggerClass::ContainerLifecycle: return "dev container lifecycle event";
    case TriggerClass::CiEvent: return "CI workflow run";
    case TriggerClass::BuildInvocation: return "project build";
    case TriggerClass::PackageInstall: return "package install";
    case TriggerClass::ShellSessionStart: return "shell session start";
  }
  return "";
}

std::string_view to_string(AttackStage stage) {
  switch (stage) {
    case AttackStage::Stage1aSourceManipulation: return "Stage1aSourceManipulation";
    case AttackStage::Stage1bPayloadInjection: return "Stage1bPayloadInjection";
    case AttackStage::Stage2Persistence: return "Stage2Persistence";
  }
  return "";
}

std::string_view describe_stage(AttackStage stage) {
  switch (stage) {
    case AttackStage::Stage1aSourceManipulation:
      return "Stage 1a - source manipulation";
    case AttackStage::Stage1bPayloadInjection:
      return "Stage 1b - payload injection";
    case AttackStage::Stage2Persistence:
      return "Stage 2 - persistence";
  }
  return "";
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Info: return "info";
    case Severity::Low: return "low";
    case Severity::Medium: return "medium";
    case Severity::High: return "high";
    case Severity::Critical: return "critical";
  }
  return "";
}

std::string_view to_string(RuleCategory category) {
  return category == RuleCategory::Command ? "command" : "documentation";
}

std::optional<Severity> parse_severity(std::string_view text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) lower.push_back(ascii_lower(c));
  constexpr std::array kAll = {Severity::Info, Severity::Low, Severity::Medium,
                               Severity::High, Severity::Critical};
  for (auto s : kAll) {
    if (to_string(s) == lower) return s;
  }
  return std::nullopt;
}

Severity escalate(Severity severity) {
  return severity == Severity::Critical
             ? Severity::Critical
             : static_cast<Severity>(static_cast<int>(severity) + 1);
}

RuleSettings::RuleSettings() {
  for (const auto& r : rule_registry()) entries_.push_back({r.id, {r.enabled, r.default_severity}});
}

const RuleSettings::Entry* RuleSettings::find(std::string_view id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const auto& e, std::string_view k) { return e.first < k; });
  if (it == entries_.end() || it->first != id) return nullptr;
  return &it->second;
}

RuleSettings::Entry& RuleSettings::entry(std::string_view id) {
  auto* e = find(id);
  if (!e) throw std::invalid_argument("unknown rule id '" + std::string(id) + "'");
  return const_cast<Entry&>(*e);
}

bool RuleSettings::enabled(std::string_view id) const {
  auto* e = find(id);
  return e != nullptr && e->enabled;
}

Severity RuleSettings::severity(std::string_view id) const {
  auto* e = find(id);
  return e ? e->severity : Severity::Info;
}

void RuleSettings::set_enabled(std::string_view id, bool enabled) { entry(id).enabled = enabled; }

void RuleSettings::set_severity(std::string_view id, Severity severity) {
  entry(id).severity = severity;
}

}  // namespace nestguard
