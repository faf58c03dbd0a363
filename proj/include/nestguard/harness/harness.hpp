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

#ifndef NESTGUARD_HARNESS_HARNESS_HPP
#define NESTGUARD_HARNESS_HARNESS_HPP

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nestguard/core/model.hpp"
#include "nestguard/extract/extractors.hpp"

namespace nestguard::harness {

inline constexpr std::chrono::milliseconds kDefaultTimeout{10000};
inline constexpr std::string_view kGateVariable = "NESTGUARD_HARNESS";

/// The single request the harness sends, newline included.
std::string_view initialize_request();

struct SandboxSnapshot {
  std::map<std::string, std::string> files;  // relative path -> sha256 hex
  std::chrono::steady_clock::time_point taken_at;
};

/// Regular files and symlinks below `dir`. Symlinks are hashed by target
/// path, never followed.
SandboxSnapshot snapshot_sandbox(const std::filesystem::path& dir);

enum class ChangeKind { Created, Modified, Deleted };
std::string_view to_string(ChangeKind kind);

struct SideEffect {
  std::string path;
  ChangeKind change;

  friend bool operator==(const SideEffect&, const SideEffect&) = default;
};

std::vector<SideEffect> diff_snapshots(const SandboxSnapshot& before,
                                       const SandboxSnapshot& after);

struct HandshakeOutcome {
  bool ok = false;
  std::chrono::milliseconds elapsed{0};
  std::optional<std::string> server_name;
  std::string reason;  // empty when ok
};

/// Writes the initialize request to `to_child` and waits on `from_child` for
/// the reply with id 1. Lines that are not JSON, or carry another id, are
/// skipped. Both descriptors stay open.
HandshakeOutcome perform_handshake(int to_child, int from_child,
                                   std::chrono::milliseconds timeout);

enum class Verdict { Benign, StealthInjection, Broken };
std::string_view to_string(Verdict verdict);

Verdict verdict(bool handshake_ok, std::size_t side_effect_count);

struct HarnessResult {
  bool handshake_ok = false;
  std::chrono::milliseconds handshake_millis{0};
  std::optional<std::string> server_name_reported;
  std::vector<SideEffect> side_effects;
  std::optional<int> child_exit;  // raw wait status
  Verdict verdict = Verdict::Broken;
  std::string reason;
  std::vector<std::string> warnings;
};

struct HarnessOptions {
  std::filesystem::path scan_root;
  std::chrono::milliseconds timeout = kDefaultTimeout;
  // Where sandboxes are created; the system temp dir when empty.
  std::filesystem::path sandbox_parent;
};

class HarnessRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws HarnessRefused unless NESTGUARD_HARNESS=1.
void require_enabled();

/// Throws HarnessRefused unless NESTGUARD_HARNESS=1 and the surface's file
/// lies under the scan root.
void check_gate(const ExecutionSurface& surface, const std::filesystem::path& scan_root);

/// Runs the surface's command in a fresh sandbox directory, attempts the
/// handshake, then kills the process group. Calls are not reentrant.
HarnessResult run_surface(const ExecutionSurface& surface, const HarnessOptions& options);

/// H1 for a StealthInjection result; nullopt otherwise.
std::optional<Finding> stealth_finding(const ExecutionSurface& surface,
                                       const HarnessResult& result,
                                       const RuleSettings& settings = RuleSettings{});

/// Minimal MCP peer for fixtures. Answers initialize and tools/list, returns
/// on end of input.
int run_mock_server(std::istream& in, std::ostream& out);

}  // namespace nestguard::harness

#endif  // NESTGUARD_HARNESS_HARNESS_HPP
