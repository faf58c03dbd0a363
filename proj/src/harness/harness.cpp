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

#include "nestguard/harness/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "nestguard/core/text.hpp"

namespace nestguard::harness {
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;

namespace {

constexpr std::string_view kInitialize =
    R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"2024-11-05","capabilities":{},"clientInfo":{"name":"nestguard-harness","version":"0"}}})"
    "\n";

std::string errno_text(int err) { return std::strerror(err); }

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

// Writes everything, with SIGPIPE held back so a dead reader shows up as
// EPIPE instead of killing us.
bool write_all(int fd, std::string_view data, int& err) {
  sigset_t block;
  sigset_t old;
  sigemptyset(&block);
  sigaddset(&block, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &block, &old);
  bool ok = true;
  while (!data.empty()) {
    auto n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      err = errno;
      ok = false;
      break;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  if (!ok && err == EPIPE) {
    timespec zero{0, 0};
    sigtimedwait(&block, nullptr, &zero);
  }
  pthread_sigmask(SIG_SETMASK, &old, nullptr);
  return ok;
}

struct Child {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
};

std::vector<std::string> command_argv(const ExecutionSurface& surface) {
  if (surface.argv && !surface.shell_semantics) return *surface.argv;
  return {"/bin/sh", "-c", surface.command_text};
}

Child spawn(const std::vector<std::string>& argv, const fs::path& cwd) {
  if (argv.empty()) throw std::runtime_error("spawn failed: empty command");
  int in[2];
  int out[2];
  int err[2];
  if (pipe2(in, O_CLOEXEC) != 0) throw std::runtime_error("pipe: " + errno_text(errno));
  if (pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw std::runtime_error("pipe: " + errno_text(errno));
  }
  if (pipe2(err, O_CLOEXEC) != 0) {
    for (int fd : {in[0], in[1], out[0], out[1]}) ::close(fd);
    throw std::runtime_error("pipe: " + errno_text(errno));
  }
  int devnull = ::open("/dev/null", O_WRONLY | O_CLOEXEC);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  std::string dir = cwd.string();

  pid_t pid = ::fork();
  if (pid == 0) {
    ::setpgid(0, 0);
    int code = 0;
    if (::chdir(dir.c_str()) != 0 || ::dup2(in[0], 0) < 0 || ::dup2(out[1], 1) < 0 ||
        (devnull >= 0 && ::dup2(devnull, 2) < 0)) {
      code = errno;
    } else {
      ::execvp(cargv[0], cargv.data());
      code = errno;
    }
    [[maybe_unused]] auto n = ::write(err[1], &code, sizeof code);
    ::_exit(127);
  }
  int fork_errno = errno;
  if (devnull >= 0) ::close(devnull);
  ::close(in[0]);
  ::close(out[1]);
  ::close(err[1]);
  if (pid < 0) {
    ::close(in[1]);
    ::close(out[0]);
    ::close(err[0]);
    throw std::runtime_error("fork: " + errno_text(fork_errno));
  }
  ::setpgid(pid, pid);  // also done by the child; whichever runs first wins

  int code = 0;
  ssize_t n;
  do {
    n = ::read(err[0], &code, sizeof code);
  } while (n < 0 && errno == EINTR);
  ::close(err[0]);
  if (n == static_cast<ssize_t>(sizeof code)) {
    ::close(in[1]);
    ::close(out[0]);
    int status = 0;
    ::waitpid(pid, &status, 0);
    throw std::runtime_error("spawn failed: " + argv[0] + ": " + errno_text(code));
  }
  return {pid, in[1], out[0]};
}

// SIGTERM to the group, SIGKILL after a second, then reap the leader.
int terminate(Child& child) {
  close_fd(child.to_child);
  close_fd(child.from_child);
  ::kill(-child.pid, SIGTERM);
  auto deadline = Clock::now() + milliseconds(1000);
  while (Clock::now() < deadline) {
    siginfo_t info{};
    if (::waitid(P_PID, static_cast<id_t>(child.pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 &&
        info.si_pid == child.pid) {
      break;
    }
    ::usleep(10000);
  }
  ::kill(-child.pid, SIGKILL);  // stragglers in the group, if any
  int status = 0;
  while (::waitpid(child.pid, &status, 0) < 0 && errno == EINTR) {
  }
  return status;
}

bool is_under(const fs::path& path, const fs::path& root) {
  std::error_code ec;
  auto p = fs::weakly_canonical(fs::absolute(path), ec);
  if (ec) return false;
  auto r = fs::weakly_canonical(fs::absolute(root), ec);
  if (ec) return false;
  auto rel = p.lexically_relative(r);
  if (rel.empty() || rel.is_absolute()) return false;
  return *rel.begin() != "..";
}

fs::path make_sandbox(const fs::path& parent) {
  fs::path base = parent.empty() ? fs::temp_directory_path() : parent;
  std::string tmpl = (base / "nestguard-sandbox-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("cannot create sandbox under " + base.string() + ": " +
                             errno_text(errno));
  }
  return tmpl;
}

std::string file_hash(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw fs::filesystem_error("cannot read", p, std::make_error_code(std::errc::io_error));
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(data);
}

}  // namespace

std::string_view initialize_request() { return kInitialize; }

SandboxSnapshot snapshot_sandbox(const fs::path& dir) {
  SandboxSnapshot snap;
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator();
       ++it) {
    const auto& entry = *it;
    auto rel = entry.path().lexically_relative(dir).generic_string();
    if (entry.is_symlink()) {
      snap.files[rel] = "link:" + fs::read_symlink(entry.path()).string();
    } else if (entry.is_regular_file()) {
      snap.files[rel] = file_hash(entry.path());
    }
  }
  snap.taken_at = Clock::now();
  return snap;
}

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Created: return "created";
    case ChangeKind::Modified: return "modified";
    case ChangeKind::Deleted: return "deleted";
  }
  return "";
}

std::vector<SideEffect> diff_snapshots(const SandboxSnapshot& before,
                                       const SandboxSnapshot& after) {
  std::vector<SideEffect> out;
  for (const auto& [path, hash] : after.files) {
    auto it = before.files.find(path);
    if (it == before.files.end()) {
      out.push_back({path, ChangeKind::Created});
    } else if (it->second != hash) {
      out.push_back({path, ChangeKind::Modified});
    }
  }
  for (const auto& [path, hash] : before.files) {
    if (!after.files.count(path)) out.push_back({path, ChangeKind::Deleted});
  }
  std::sort(out.begin(), out.end(),
            [](const SideEffect& a, const SideEffect& b) { return a.path < b.path; });
  return out;
}

HandshakeOutcome perform_handshake(int to_child, int from_child, milliseconds timeout) {
  HandshakeOutcome out;
  auto start = Clock::now();
  auto deadline = start + timeout;
  auto finish = [&](std::string reason) {
    out.reason = std::move(reason);
    out.elapsed = std::chrono::duration_cast<milliseconds>(Clock::now() - start);
    return out;
  };

  int err = 0;
  if (!write_all(to_child, kInitialize, err)) {
    return finish(err == EPIPE ? "broken pipe" : "write failed: " + errno_text(err));
  }

  std::string buffer;
  char chunk[4096];
  while (true) {
    auto newline = buffer.find('\n');
    while (newline != std::string::npos) {
      std::string line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      newline = buffer.find('\n');
      auto msg = nlohmann::json::parse(line, nullptr, false);
      if (msg.is_discarded() || !msg.is_object()) continue;
      auto id = msg.find("id");
      if (id == msg.end() || !id->is_number_integer() || id->get<long long>() != 1) continue;
      auto result = msg.find("result");
      if (result != msg.end() && result->is_object()) {
        auto info = result->find("serverInfo");
        if (info != result->end() && info->is_object()) {
          auto name = info->find("name");
          if (name != info->end() && name->is_string()) {
            out.ok = true;
            out.server_name = name->get<std::string>();
            return finish("");
          }
        }
      }
      if (auto e = msg.find("error"); e != msg.end()) {
        return finish("error response: " + e->dump());
      }
      return finish("malformed response");
    }

    auto remaining = std::chrono::duration_cast<milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) return finish("timeout");
    pollfd pfd{from_child, POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      return finish("poll failed: " + errno_text(errno));
    }
    if (r == 0) return finish("timeout");
    auto n = ::read(from_child, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return finish("read failed: " + errno_text(errno));
    }
    if (n == 0) return finish("eof before response");
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Benign: return "benign";
    case Verdict::StealthInjection: return "stealth-injection";
    case Verdict::Broken: return "broken";
  }
  return "";
}

Verdict verdict(bool handshake_ok, std::size_t side_effect_count) {
  if (!handshake_ok) return Verdict::Broken;
  return side_effect_count > 0 ? Verdict::StealthInjection : Verdict::Benign;
}

void require_enabled() {
  const char* gate = std::getenv(std::string(kGateVariable).c_str());
  if (gate == nullptr || std::string_view(gate) != "1") {
    throw HarnessRefused("dynamic verification runs scanned commands; set " +
                         std::string(kGateVariable) + "=1 to allow it");
  }
}

void check_gate(const ExecutionSurface& surface, const fs::path& scan_root) {
  require_enabled();
  if (!surface.target || surface.target->path.empty()) {
    throw HarnessRefused("surface has no source file");
  }
  if (scan_root.empty() || !is_under(surface.target->path, scan_root)) {
    throw HarnessRefused(surface.target->path.string() + " is not under the scan root " +
                         scan_root.string());
  }
}

HarnessResult run_surface(const ExecutionSurface& surface, const HarnessOptions& options) {
  check_gate(surface, options.scan_root);
  HarnessResult result;
  fs::path sandbox = make_sandbox(options.sandbox_parent);

  try {
    auto before = snapshot_sandbox(sandbox);
    Child child;
    try {
      child = spawn(command_argv(surface), sandbox);
    } catch (const std::runtime_error& e) {
      result.reason = e.what();
    }
    if (child.pid > 0) {
      auto hs = perform_handshake(child.to_child, child.from_child, options.timeout);
      result.handshake_ok = hs.ok;
      result.handshake_millis = hs.elapsed;
      result.server_name_reported = hs.server_name;
      result.reason = hs.reason;
      auto after = snapshot_sandbox(sandbox);
      result.side_effects = diff_snapshots(before, after);
      result.child_exit = terminate(child);
    }
  } catch (const fs::filesystem_error& e) {
    result.reason = std::string("sandbox snapshot failed: ") + e.what();
    result.handshake_ok = false;
  }
  result.verdict = verdict(result.handshake_ok, result.side_effects.size());

  std::error_code ec;
  fs::remove_all(sandbox, ec);
  if (ec) result.warnings.push_back("could not remove sandbox " + sandbox.string() + ": " + ec.message());
  return result;
}

std::optional<Finding> stealth_finding(const ExecutionSurface& surface, const HarnessResult& result,
                                       const RuleSettings& settings) {
  if (result.verdict != Verdict::StealthInjection || !settings.enabled(rule_ids::kStealthConfirmed)) {
    return std::nullopt;
  }
  const Rule* rule = find_rule(rule_ids::kStealthConfirmed);
  Finding f;
  f.rule_id = std::string(rule_ids::kStealthConfirmed);
  f.severity = settings.severity(rule_ids::kStealthConfirmed);
  f.stage = rule ? rule->stage : AttackStage::Stage2Persistence;
  f.target_path = surface.target->relative_path;
  f.locator = surface.locator;
  f.evidence = literal_evidence(surface.target->text, surface.command_text,
                                surface.locator.span.begin, surface.locator.span,
                                f.evidence_truncated);
  std::string effects;
  for (const auto& e : result.side_effects) {
    if (!effects.empty()) effects += ", ";
    effects += e.path + " (" + std::string(to_string(e.change)) + ")";
  }
  f.message = "handshake answered by '" + result.server_name_reported.value_or("") +
              "' while the command changed " + std::to_string(result.side_effects.size()) +
              " sandbox file(s): " + effects;
  f.impact = surface.impact;
  f.remediation = rule ? rule->remediation : "";
  f.trigger = surface.trigger;
  return f;
}

int run_mock_server(std::istream& in, std::ostream& out) {
  using nlohmann::json;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto msg = json::parse(line, nullptr, false);
    if (msg.is_discarded() || !msg.is_object()) {
      out << json{{"jsonrpc", "2.0"}, {"id", nullptr},
                  {"error", {{"code", -32700}, {"message", "parse error"}}}}.dump()
          << '\n' << std::flush;
      continue;
    }
    if (!msg.contains("id")) continue;  // notification
    json reply = {{"jsonrpc", "2.0"}, {"id", msg["id"]}};
    std::string method = msg.value("method", "");
    if (method == "initialize") {
      reply["result"] = {{"protocolVersion", "2024-11-05"},
                         {"capabilities", {{"tools", json::object()}}},
                         {"serverInfo", {{"name", "mock-mcp"}, {"version", "0"}}}};
    } else if (method == "tools/list") {
      reply["result"] = {{"tools", json::array()}};
    } else {
      reply["error"] = {{"code", -32601}, {"message", "method not found"}};
    }
    out << reply.dump() << '\n' << std::flush;
  }
  return 0;
}

}  // namespace nestguard::harness
