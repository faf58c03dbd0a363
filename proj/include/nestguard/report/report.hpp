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

#ifndef NESTGUARD_REPORT_REPORT_HPP
#define NESTGUARD_REPORT_REPORT_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nestguard/core/model.hpp"
#include "nestguard/extract/extractors.hpp"
#include "nestguard/harness/harness.hpp"

namespace nestguard::report {

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitError = 2;

struct ReportMeta {
  std::string tool_version = NESTGUARD_VERSION;
  std::string scan_root;
  std::size_t targets_scanned = 0;
  std::size_t surfaces_analyzed = 0;
  std::optional<std::string> timestamp;
};

struct Report {
  ReportMeta meta;
  std::vector<Finding> findings;  // path, span start, rule id
  std::vector<Warning> warnings;
  // Indexed by Severity.
  std::array<std::size_t, 5> summary{};
  std::size_t suppressed = 0;
};

using Baseline = std::set<std::string>;

/// sha256 over rule id, path and evidence. Spans are left out on purpose so
/// that edits elsewhere in the file keep the fingerprint.
std::string fingerprint(const Finding& finding);

bool finding_less(const Finding& a, const Finding& b);

Report assemble_report(std::vector<Finding> findings, std::vector<Warning> warnings,
                       ReportMeta meta, const Baseline* baseline = nullptr);

std::string render_json(const Report& report);
std::string render_text(const Report& report);

/// "[Stage 2 - persistence]" and friends.
std::string stage_tag(AttackStage stage);

int exit_code(const Report& report, Severity fail_on);

/// {"version":1,"fingerprints":[...]} over all findings, suppressed or not.
std::string render_baseline(const std::vector<Finding>& findings);
/// Throws std::runtime_error on unreadable or malformed files.
Baseline load_baseline(const std::filesystem::path& path);

/// One harness run as reported by `verify`.
struct VerificationEntry {
  std::string path;
  std::string locator;
  std::string command;
  harness::HarnessResult result;
};

/// The report (H1 findings) plus a "verification" array.
std::string render_verification_json(const std::vector<VerificationEntry>& entries,
                                     const Report& report);
std::string render_verification_text(const std::vector<VerificationEntry>& entries,
                                     const Report& report);

/// UTC, second precision, ISO 8601.
std::string utc_timestamp();

}  // namespace nestguard::report

#endif  // NESTGUARD_REPORT_REPORT_HPP
