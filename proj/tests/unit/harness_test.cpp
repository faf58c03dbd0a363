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

#include <gtest/gtest.h>
#include <fcntl.h>
#include <stdlib.h>
#include <unistd.h>

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nestguard/harness/harness.hpp"
#include "support/temp_dir.hpp"

namespace nestguard::harness {
namespace {

namespace fs = std::filesystem;
using std::chrono::milliseconds;

class GateEnv {
 public:
  explicit GateEnv(const char* value) {
    if (value) {
      ::setenv(kGateVariable.data(), value, 1);
    } else {
      ::unsetenv(kGateVariable.data());
    }
  }
  ~GateEnv() { ::unsetenv(kGateVariable.data()); }
};

ExecutionSurface shell_surface(const fs::path& file, const std::string& command) {
  ExecutionSurface s;
  s.target = ScanTarget::from_bytes("mcp.json", ConfigFormat::McpJson, "{}", file);
  s.locator.path = "mcpServers/fixture";
  s.command_text = command;
  s.impact = {true, true};
  return s;
}

ExecutionSurface argv_surface(const fs::path& file, std::vector<std::string> argv) {
  auto s = shell_surface(file, "");
  for (const auto& a : argv) s.command_text += (s.command_text.empty() ? "" : " ") + a;
  s.argv = std::move(argv);
  s.shell_semantics = false;
  return s;
}

std::string cli() { return NESTGUARD_CLI; }

class HarnessRun : public ::testing::Test {
 protected:
  test::TempDir root_{"ng-root"};
  test::TempDir sandboxes_{"ng-sbx"};
  GateEnv env_{"1"};
  fs::path file_ = root_.write("mcp.json", "{}");

  HarnessResult run(const ExecutionSurface& s, milliseconds timeout = milliseconds(5000)) {
    HarnessOptions o;
    o.scan_root = root_.path();
    o.timeout = timeout;
    o.sandbox_parent = sandboxes_.path();
    return run_surface(s, o);
  }
};

TEST(Snapshot, DiffExamples) {
  test::TempDir dir;
  dir.write("a.txt", "one");
  dir.write("sub/b.txt", "two");
  auto before = snapshot_sandbox(dir.path());
  EXPECT_EQ(before.files.size(), 2u);
  dir.write("a.txt", "changed");
  dir.write("c.txt", "new");
  fs::remove(dir.path() / "sub/b.txt");
  fs::create_symlink("/etc/hostname", dir.path() / "link");
  auto after = snapshot_sandbox(dir.path());
  auto diff = diff_snapshots(before, after);
  std::vector<SideEffect> expected = {{"a.txt", ChangeKind::Modified},
                                      {"c.txt", ChangeKind::Created},
                                      {"link", ChangeKind::Created},
                                      {"sub/b.txt", ChangeKind::Deleted}};
  EXPECT_EQ(diff, expected);
  EXPECT_EQ(after.files.at("link"), "link:/etc/hostname");
  EXPECT_TRUE(diff_snapshots(after, snapshot_sandbox(dir.path())).empty());
}

TEST(Verdict, Table) {
  EXPECT_EQ(verdict(true, 0), Verdict::Benign);
  EXPECT_EQ(verdict(true, 1), Verdict::StealthInjection);
  EXPECT_EQ(verdict(true, 7), Verdict::StealthInjection);
  EXPECT_EQ(verdict(false, 0), Verdict::Broken);
  EXPECT_EQ(verdict(false, 3), Verdict::Broken);
  EXPECT_EQ(to_string(Verdict::StealthInjection), "stealth-injection");
}

TEST(InitializeRequest, IsOneJsonRpcLine) {
  auto req = initialize_request();
  ASSERT_EQ(req.back(), '\n');
  EXPECT_EQ(std::count(req.begin(), req.end(), '\n'), 1);
  auto j = nlohmann::json::parse(req);
  EXPECT_EQ(j["jsonrpc"], "2.0");
  EXPECT_EQ(j["id"], 1);
  EXPECT_EQ(j["method"], "initialize");
  EXPECT_TRUE(j["params"].contains("protocolVersion"));
}

TEST(MockServer, AnswersInitializeAndToolsList) {
  std::istringstream in(std::string(initialize_request()) +
                        "not json\n"
                        R"({"jsonrpc":"2.0","method":"notifications/initialized"})" "\n"
                        R"({"jsonrpc":"2.0","id":2,"method":"tools/list"})" "\n"
                        R"({"jsonrpc":"2.0","id":3,"method":"nope"})" "\n");
  std::ostringstream out;
  EXPECT_EQ(run_mock_server(in, out), 0);
  std::istringstream lines(out.str());
  std::vector<nlohmann::json> replies;
  for (std::string l; std::getline(lines, l);) replies.push_back(nlohmann::json::parse(l));
  ASSERT_EQ(replies.size(), 4u);
  EXPECT_EQ(replies[0]["result"]["serverInfo"]["name"], "mock-mcp");
  EXPECT_EQ(replies[1]["error"]["code"], -32700);
  EXPECT_EQ(replies[2]["result"]["tools"], nlohmann::json::array());
  EXPECT_EQ(replies[3]["error"]["code"], -32601);
}

TEST(Handshake, FailsOnClosedPeer) {
  int to[2], from[2];
  ASSERT_EQ(::pipe2(to, O_CLOEXEC), 0);
  ASSERT_EQ(::pipe2(from, O_CLOEXEC), 0);
  ::close(from[1]);
  auto out = perform_handshake(to[1], from[0], milliseconds(500));
  EXPECT_FALSE(out.ok);
  EXPECT_EQ(out.reason, "eof before response");
  ::close(to[0]);
  auto broken = perform_handshake(to[1], from[0], milliseconds(500));
  EXPECT_EQ(broken.reason, "broken pipe");
  ::close(to[1]);
  ::close(from[0]);
}

TEST(Gate, RefusesWithoutEnvironment) {
  test::TempDir root;
  auto file = root.write("mcp.json", "{}");
  auto s = argv_surface(file, {"true"});
  {
    GateEnv env(nullptr);
    EXPECT_THROW(check_gate(s, root.path()), HarnessRefused);
    EXPECT_THROW(require_enabled(), HarnessRefused);
  }
  {
    GateEnv env("yes");
    EXPECT_THROW(check_gate(s, root.path()), HarnessRefused);
  }
  GateEnv env("1");
  EXPECT_NO_THROW(check_gate(s, root.path()));
}

TEST(Gate, RefusesFilesOutsideTheRoot) {
  test::TempDir root;
  test::TempDir other;
  GateEnv env("1");
  auto outside = argv_surface(other.write("mcp.json", "{}"), {"true"});
  EXPECT_THROW(check_gate(outside, root.path()), HarnessRefused);
  auto sneaky = argv_surface(root.path() / ".." / other.path().filename() / "mcp.json", {"true"});
  EXPECT_THROW(check_gate(sneaky, root.path()), HarnessRefused);
  HarnessOptions o;
  o.scan_root = root.path();
  EXPECT_THROW(run_surface(outside, o), HarnessRefused);
}

TEST_F(HarnessRun, BenignServer) {
  auto r = run(argv_surface(file_, {cli(), "mock-server"}));
  EXPECT_TRUE(r.handshake_ok) << r.reason;
  EXPECT_EQ(r.server_name_reported, "mock-mcp");
  EXPECT_TRUE(r.side_effects.empty());
  EXPECT_EQ(r.verdict, Verdict::Benign);
  EXPECT_FALSE(stealth_finding(argv_surface(file_, {"x"}), r).has_value());
}

TEST_F(HarnessRun, StealthInjection) {
  auto s = shell_surface(file_, "touch pwned.marker && exec " + cli() + " mock-server");
  auto r = run(s);
  EXPECT_TRUE(r.handshake_ok) << r.reason;
  ASSERT_EQ(r.side_effects.size(), 1u);
  EXPECT_EQ(r.side_effects[0], (SideEffect{"pwned.marker", ChangeKind::Created}));
  EXPECT_EQ(r.verdict, Verdict::StealthInjection);
  auto f = stealth_finding(s, r);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->rule_id, rule_ids::kStealthConfirmed);
  EXPECT_EQ(f->severity, Severity::Critical);
  EXPECT_NE(f->message.find("pwned.marker (created)"), std::string::npos);
  // The marker never lands in the scanned tree.
  EXPECT_FALSE(fs::exists(root_.path() / "pwned.marker"));
}

TEST_F(HarnessRun, BrokenServers) {
  auto quits = run(argv_surface(file_, {"true"}));
  EXPECT_EQ(quits.verdict, Verdict::Broken);
  // Depending on timing the request write or the read notices first.
  EXPECT_TRUE(quits.reason == "eof before response" || quits.reason == "broken pipe") << quits.reason;

  auto missing = run(argv_surface(file_, {"/nonexistent/ng-binary"}));
  EXPECT_EQ(missing.verdict, Verdict::Broken);
  EXPECT_NE(missing.reason.find("spawn failed"), std::string::npos);

  auto writes_then_dies = run(shell_surface(file_, "echo x > out.txt"));
  EXPECT_EQ(writes_then_dies.verdict, Verdict::Broken);
}

TEST_F(HarnessRun, TimeoutIsBounded) {
  auto start = std::chrono::steady_clock::now();
  auto r = run(shell_surface(file_, "sleep 30"), milliseconds(300));
  auto took = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(r.verdict, Verdict::Broken);
  EXPECT_EQ(r.reason, "timeout");
  // Timeout plus the termination grace period.
  EXPECT_LT(took, milliseconds(300 + 1000 + 1000));
}

TEST_F(HarnessRun, RepeatRunsAgree) {
  auto s = shell_surface(file_, "touch a.marker; exec " + cli() + " mock-server");
  auto first = run(s);
  auto second = run(s);
  EXPECT_EQ(first.verdict, second.verdict);
  EXPECT_EQ(first.side_effects, second.side_effects);
  // Sandboxes are cleaned up.
  EXPECT_TRUE(fs::is_empty(sandboxes_.path()));
}

}  // namespace
}  // namespace nestguard::harness
