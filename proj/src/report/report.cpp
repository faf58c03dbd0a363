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

#include "nestguard/report/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "nestguard/core/text.hpp"

namespace nestguard::report {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array<Severity, 5> kSeverityOrder = {Severity::Critical, Severity::High,
                                                    Severity::Medium, Severity::Low,
                                                    Severity::Info};

std::string_view title_of(const Finding& f) {
  const Rule* rule = find_rule(f.rule_id);
  return rule ? std::string_view(rule->title) : std::string_view();
}

ojson finding_json(const Finding& f) {
  ojson j;
  j["rule_id"] = f.rule_id;
  j["severity"] = to_string(f.severity);
  j["stage"] = to_string(f.stage);
  j["title"] = title_of(f);
  j["path"] = f.target_path;
  j["line"] = f.locator.span.line;
  j["column"] = f.locator.span.column;
  j["end_line"] = f.locator.span.end_line;
  j["end_column"] = f.locator.span.end_column;
  j["byte_range"] = {f.locator.span.begin, f.locator.span.end};
  j["locator"] = f.locator.path;
  j["evidence"] = f.evidence;
  j["evidence_truncated"] = f.evidence_truncated;
  j["message"] = f.message;
  j["impact"] = {{"pc", f.impact.pc}, {"oss", f.impact.oss}};
  j["trigger"] = f.trigger ? ojson(to_string(*f.trigger)) : ojson(nullptr);
  j["remediation"] = f.remediation;
  j["fingerprint"] = fingerprint(f);
  return j;
}

std::string indent_lines(std::string_view text, std::string_view pad) {
  std::string out;
  for (const auto& line : split_lines(text)) {
    out += pad;
    out += line.text;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string fingerprint(const Finding& finding) {
  std::string material = finding.rule_id;
  material.push_back('\0');
  material += finding.target_path;
  material.push_back('\0');
  material += finding.evidence;
  return sha256_hex(material);
}

bool finding_less(const Finding& a, const Finding& b) {
  return std::tie(a.target_path, a.locator.span.begin, a.rule_id, a.locator.span.end,
                  a.evidence, a.message, a.locator.path) <
         std::tie(b.target_path, b.locator.span.begin, b.rule_id, b.locator.span.end,
                  b.evidence, b.message, b.locator.path);
}

Report assemble_report(std::vector<Finding> findings, std::vector<Warning> warnings,
                       ReportMeta meta, const Baseline* baseline) {
  Report r;
  r.meta = std::move(meta);
  if (baseline) {
    auto keep = std::stable_partition(findings.begin(), findings.end(), [&](const Finding& f) {
      return !baseline->count(fingerprint(f));
    });
    r.suppressed = static_cast<std::size_t>(findings.end() - keep);
    findings.erase(keep, findings.end());
  }
  std::sort(findings.begin(), findings.end(), finding_less);
  for (const auto& f : findings) ++r.summary[static_cast<std::size_t>(f.severity)];
  r.findings = std::move(findings);
  std::sort(warnings.begin(), warnings.end(), [](const Warning& a, const Warning& b) {
    return std::tie(a.path, a.message) < std::tie(b.path, b.message);
  });
  warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
  r.warnings = std::move(warnings);
  return r;
}

namespace {

ojson report_json(const Report& report) {
  ojson j;
  j["tool_version"] = report.meta.tool_version;
  j["scan_root"] = report.meta.scan_root;
  if (report.meta.timestamp) j["timestamp"] = *report.meta.timestamp;
  j["targets_scanned"] = report.meta.targets_scanned;
  j["surfaces_analyzed"] = report.meta.surfaces_analyzed;
  ojson summary = ojson::object();
  for (auto s : kSeverityOrder) summary[std::string(to_string(s))] = report.summary[static_cast<std::size_t>(s)];
  summary["suppressed"] = report.suppressed;
  j["summary"] = summary;
  ojson findings = ojson::array();
  for (const auto& f : report.findings) findings.push_back(finding_json(f));
  j["findings"] = findings;
  ojson warnings = ojson::array();
  for (const auto& w : report.warnings) warnings.push_back({{"path", w.path}, {"message", w.message}});
  j["warnings"] = warnings;
  return j;
}

std::string dump(const ojson& j) {
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

}  // namespace

std::string render_json(const Report& report) { return dump(report_json(report)); }

std::string render_verification_json(const std::vector<VerificationEntry>& entries,
                                     const Report& report) {
  ojson j = report_json(report);
  ojson runs = ojson::array();
  for (const auto& e : entries) {
    const auto& r = e.result;
    ojson run;
    run["path"] = e.path;
    run["locator"] = e.locator;
    run["command"] = e.command;
    run["verdict"] = harness::to_string(r.verdict);
    run["handshake_ok"] = r.handshake_ok;
    run["handshake_millis"] = r.handshake_millis.count();
    run["server_name"] = r.server_name_reported ? ojson(*r.server_name_reported) : ojson(nullptr);
    ojson effects = ojson::array();
    for (const auto& s : r.side_effects) {
      effects.push_back({{"path", s.path}, {"change", harness::to_string(s.change)}});
    }
    run["side_effects"] = effects;
    run["reason"] = r.reason;
    run["child_exit"] = r.child_exit ? ojson(*r.child_exit) : ojson(nullptr);
    runs.push_back(run);
  }
  j["verification"] = runs;
  return dump(j);
}

std::string render_verification_text(const std::vector<VerificationEntry>& entries,
                                     const Report& report) {
  std::ostringstream out;
  for (const auto& e : entries) {
    const auto& r = e.result;
    out << harness::to_string(r.verdict) << "  " << e.path << "  " << e.locator << "\n";
    out << "  command: " << e.command << "\n";
    out << "  handshake: " << (r.handshake_ok ? "ok" : "failed") << " in "
        << r.handshake_millis.count() << " ms";
    if (r.server_name_reported) out << ", server '" << *r.server_name_reported << "'";
    if (!r.reason.empty()) out << " (" << r.reason << ")";
    out << "\n";
    for (const auto& s : r.side_effects) {
      out << "  side effect: " << s.path << " " << harness::to_string(s.change) << "\n";
    }
    out << "\n";
  }
  if (entries.empty()) out << "no MCP startup commands found\n\n";
  out << render_text(report);
  return out.str();
}

std::string stage_tag(AttackStage stage) { return "[" + std::string(describe_stage(stage)) + "]"; }

std::string render_text(const Report& report) {
  std::ostringstream out;
  for (const auto& f : report.findings) {
    std::string sev(to_string(f.severity));
    std::transform(sev.begin(), sev.end(), sev.begin(), [](unsigned char c) {
      return static_cast<char>(std::toupper(c));
    });
    out << sev << "  " << f.rule_id << "  " << f.target_path << ":" << f.locator.span.line << ":"
        << f.locator.span.column << "  " << stage_tag(f.stage) << "\n";
    out << "  " << title_of(f) << "\n";
    out << "  " << f.message << "\n";
    auto excerpt = utf8_prefix(f.evidence, kMaxEvidenceBytes);
    std::string shown(excerpt);
    if (excerpt.size() < f.evidence.size() || f.evidence_truncated) shown += "…";
    out << "  evidence:\n" << indent_lines(shown, "    | ");
    if (!f.remediation.empty()) out << "  fix: " << f.remediation << "\n";
    out << "\n";
  }
  for (const auto& w : report.warnings) out << "warning: " << w.path << ": " << w.message << "\n";
  if (!report.warnings.empty()) out << "\n";
  if (report.findings.empty()) out << "no findings\n";
  out << report.findings.size() << " finding(s) in " << report.meta.targets_scanned
      << " file(s), " << report.meta.surfaces_analyzed << " command surface(s):";
  for (auto s : kSeverityOrder) {
    out << " " << to_string(s) << "=" << report.summary[static_cast<std::size_t>(s)];
  }
  out << " suppressed=" << report.suppressed << "\n";
  return out.str();
}

int exit_code(const Report& report, Severity fail_on) {
  bool hit = std::any_of(report.findings.begin(), report.findings.end(),
                         [&](const Finding& f) { return f.severity >= fail_on; });
  return hit ? kExitFindings : kExitClean;
}

std::string render_baseline(const std::vector<Finding>& findings) {
  std::set<std::string> prints;
  for (const auto& f : findings) prints.insert(fingerprint(f));
  ojson j;
  j["version"] = 1;
  j["fingerprints"] = prints;
  return j.dump(2) + "\n";
}

Baseline load_baseline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read baseline " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("fingerprints") ||
      !j["fingerprints"].is_array()) {
    throw std::runtime_error("malformed baseline " + path.string());
  }
  Baseline out;
  for (const auto& v : j["fingerprints"]) {
    if (!v.is_string()) throw std::runtime_error("malformed baseline " + path.string());
    out.insert(v.get<std::string>());
  }
  return out;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace nestguard::report
