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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nestguard/core/model.hpp"
#include "nestguard/harness/harness.hpp"
#include "nestguard/report/report.hpp"
#include "nestguard/report/scanner.hpp"

namespace fs = std::filesystem;
using namespace nestguard;

namespace {

struct CommonArgs {
  std::string root;
  std::string format = "text";
  std::string rules_file;
};

report::RuleConfig load_config(const std::string& path) {
  return path.empty() ? report::RuleConfig{} : report::load_rule_config(path);
}

bool write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  return static_cast<bool>(out);
}

int run_scan(const CommonArgs& args, bool docs, Severity fail_on, const std::string& baseline_file,
             const std::string& write_baseline, bool no_timestamp) {
  report::ScanOptions options;
  options.include_docs = docs;
  options.config = load_config(args.rules_file);
  auto scan = report::scan_tree(args.root, options);

  if (!write_baseline.empty() && !write_file(write_baseline, report::render_baseline(scan.findings))) {
    std::cerr << "nestguard: cannot write baseline " << write_baseline << "\n";
    return report::kExitError;
  }
  std::optional<report::Baseline> baseline;
  if (!baseline_file.empty()) baseline = report::load_baseline(baseline_file);

  report::ReportMeta meta;
  meta.scan_root = args.root;
  meta.targets_scanned = scan.targets_scanned;
  meta.surfaces_analyzed = scan.surfaces_analyzed;
  if (!no_timestamp) meta.timestamp = report::utc_timestamp();
  auto rep = report::assemble_report(std::move(scan.findings), std::move(scan.warnings), meta,
                                     baseline ? &*baseline : nullptr);
  std::cout << (args.format == "json" ? report::render_json(rep) : report::render_text(rep));
  return report::exit_code(rep, fail_on);
}

int run_verify(const CommonArgs& args, long timeout_ms) {
  harness::require_enabled();
  report::ScanOptions options;
  options.config = load_config(args.rules_file);
  auto scan = report::scan_tree(args.root, options);

  harness::HarnessOptions hopts;
  hopts.scan_root = args.root;
  hopts.timeout = std::chrono::milliseconds(timeout_ms);

  std::vector<report::VerificationEntry> entries;
  std::vector<Finding> findings;
  std::vector<Warning> warnings;
  for (const auto& surface : scan.surfaces) {
    if (surface.trigger != TriggerClass::McpServerStartup) continue;
    auto result = harness::run_surface(surface, hopts);
    if (auto f = harness::stealth_finding(surface, result, options.config.settings)) {
      findings.push_back(std::move(*f));
    }
    for (const auto& w : result.warnings) warnings.push_back({surface.target->relative_path, w});
    entries.push_back({surface.target->relative_path, surface.locator.path, surface.command_text,
                       std::move(result)});
  }

  report::ReportMeta meta;
  meta.scan_root = args.root;
  meta.targets_scanned = scan.targets_scanned;
  meta.surfaces_analyzed = entries.size();
  auto rep = report::assemble_report(std::move(findings), std::move(warnings), meta);
  std::cout << (args.format == "json" ? report::render_verification_json(entries, rep)
                                      : report::render_verification_text(entries, rep));
  bool stealth = std::any_of(entries.begin(), entries.end(), [](const auto& e) {
    return e.result.verdict == harness::Verdict::StealthInjection;
  });
  return stealth ? report::kExitFindings : report::kExitClean;
}

int run_rules(const std::string& format) {
  if (format == "json") {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rule_registry()) {
      arr.push_back({{"id", r.id},
                     {"category", to_string(r.category)},
                     {"stage", to_string(r.stage)},
                     {"default_severity", to_string(r.default_severity)},
                     {"title", r.title},
                     {"remediation", r.remediation}});
    }
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& r : rule_registry()) {
    std::cout << r.id << "  " << to_string(r.default_severity) << "  "
              << describe_stage(r.stage) << "\n  " << r.title << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scanner for command injection and hidden instructions in AI-IDE config files"};
  app.set_version_flag("--version", std::string(NESTGUARD_VERSION));
  app.require_subcommand(1);

  const std::map<std::string, Severity> severities = {{"info", Severity::Info},
                                                      {"low", Severity::Low},
                                                      {"medium", Severity::Medium},
                                                      {"high", Severity::High},
                                                      {"critical", Severity::Critical}};
  const std::vector<std::string> formats = {"text", "json"};

  CommonArgs scan_args;
  bool docs = false;
  std::string fail_on_text = "high";
  std::string baseline_file;
  std::string write_baseline;
  bool no_timestamp = false;
  auto* scan = app.add_subcommand("scan", "Statically scan a directory tree");
  scan->add_option("root", scan_args.root, "Directory to scan")->required();
  scan->add_flag("--docs", docs, "Also scan Markdown and HTML documentation");
  scan->add_option("--format", scan_args.format, "Output format")->check(CLI::IsMember(formats));
  scan->add_option("--fail-on", fail_on_text, "Lowest severity that makes the exit code 1")
      ->transform(CLI::IsMember(severities, CLI::ignore_case));
  scan->add_option("--rules", scan_args.rules_file, "Rule-config JSON file");
  scan->add_option("--baseline", baseline_file, "Suppress findings listed in this baseline");
  scan->add_option("--write-baseline", write_baseline, "Write fingerprints of all findings here");
  scan->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp for reproducible output");

  CommonArgs verify_args;
  long timeout_ms = harness::kDefaultTimeout.count();
  auto* verify = app.add_subcommand(
      "verify", "Run every MCP startup command against the handshake harness (NESTGUARD_HARNESS=1)");
  verify->add_option("root", verify_args.root, "Directory to scan")->required();
  verify->add_option("--format", verify_args.format, "Output format")->check(CLI::IsMember(formats));
  verify->add_option("--rules", verify_args.rules_file, "Rule-config JSON file");
  verify->add_option("--timeout-ms", timeout_ms, "Handshake timeout")->check(CLI::PositiveNumber);

  auto* mock = app.add_subcommand("mock-server", "Minimal MCP server on stdio for harness fixtures");

  std::string rules_format = "text";
  auto* rules = app.add_subcommand("rules", "List the rule registry");
  rules->add_option("--format", rules_format, "Output format")->check(CLI::IsMember(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : report::kExitError;
  }

  try {
    if (*scan) {
      return run_scan(scan_args, docs, severities.at(fail_on_text), baseline_file, write_baseline, no_timestamp);
    }
    if (*verify) return run_verify(verify_args, timeout_ms);
    if (*mock) return harness::run_mock_server(std::cin, std::cout);
    if (*rules) return run_rules(rules_format);
  } catch (const harness::HarnessRefused& e) {
    std::cerr << "nestguard: harness refused: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "nestguard: " << e.what() << "\n";
  }
  return report::kExitError;
}
