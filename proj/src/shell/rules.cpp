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

#include "nestguard/shell/rules.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "nestguard/core/text.hpp"
#include "nestguard/core/unicode.hpp"

namespace nestguard::shell {
namespace {

std::string basename_of(std::string_view w) {
  auto slash = w.find_last_of('/');
  return std::string(slash == std::string_view::npos ? w : w.substr(slash + 1));
}

bool is_shell(std::string_view name) {
  return name == "sh" || name == "bash" || name == "zsh" || name == "dash" || name == "ksh" ||
         name == "ash";
}

bool is_interpreter(std::string_view name) {
  if (is_shell(name) || name == "node" || name == "nodejs" || name == "perl" || name == "ruby") {
    return true;
  }
  // python, python3, python3.12
  if (name.starts_with("python")) {
    return name.substr(6).find_first_not_of("0123456789.") == std::string_view::npos;
  }
  return false;
}

// Programs that run the text they are handed, beyond plain interpreters.
bool is_eval_sink(std::string_view name) {
  return is_interpreter(name) || name == "eval" || name == "source" || name == ".";
}

bool is_fetch(std::string_view name) {
  return name == "curl" || name == "wget" || name == "fetch" ||
         iequals(name, "Invoke-WebRequest") || iequals(name, "iwr");
}

bool is_netcat(std::string_view name) {
  return name == "nc" || name == "ncat" || name == "netcat" || name.starts_with("nc.");
}

// Single-dash short-option cluster ("-e", "-lvpe") containing `flag`.
bool short_flag(std::string_view arg, char flag) {
  return arg.size() >= 2 && arg[0] == '-' && arg[1] != '-' &&
         arg.substr(1).find(flag) != std::string_view::npos;
}

std::string_view slice(const CommandAst& ast, std::size_t b, std::size_t e) {
  std::string_view s = ast.source;
  b = std::min(b, s.size());
  e = std::min(std::max(e, b), s.size());
  return s.substr(b, e - b);
}

std::string segment_text(const CommandAst& ast, const Segment& seg) {
  return std::string(slice(ast, seg.begin, seg.end));
}

std::string span_text(const CommandAst& ast, const Segment& first, const Segment& last) {
  return std::string(slice(ast, first.begin, last.end));
}

bool is_decode(const Segment& seg) {
  auto name = command_name(seg);
  auto idx = command_index(seg);
  if (!idx) return false;
  std::vector<std::string> args;
  for (std::size_t i = *idx + 1; i < seg.words.size(); ++i) args.push_back(seg.words[i].value);
  auto has = [&](auto pred) { return std::any_of(args.begin(), args.end(), pred); };
  if (name == "base64" || name == "base32") {
    return has([](const std::string& a) {
      return a == "--decode" || short_flag(a, 'd') || a == "-D";
    });
  }
  if (name == "openssl") {
    bool codec = has([](const std::string& a) { return a == "enc" || a == "base64"; });
    return codec && has([](const std::string& a) { return a == "-d"; });
  }
  if (name == "xxd") return has([](const std::string& a) { return short_flag(a, 'r'); });
  return false;
}

bool fetch_segment(const Segment& seg) { return is_fetch(command_name(seg)); }

bool unit_contains(const CommandAst& ast, bool (*pred)(const Segment&)) {
  for (const auto* unit : all_units(ast)) {
    for (const auto& seg : unit->segments) {
      if (pred(seg)) return true;
    }
  }
  return false;
}

std::string fetch_url(const Segment& seg) {
  auto idx = command_index(seg);
  if (!idx) return {};
  for (std::size_t i = *idx + 1; i < seg.words.size(); ++i) {
    if (seg.words[i].value.find("://") != std::string::npos) return seg.words[i].value;
  }
  for (std::size_t i = *idx + 1; i < seg.words.size(); ++i) {
    const auto& v = seg.words[i].value;
    if (v.starts_with("-")) continue;
    if (i > *idx + 1) {
      // Value of a preceding option such as -o FILE.
      const auto& prev = seg.words[i - 1].value;
      if (prev == "-o" || prev == "-O" || prev == "--output" || prev == "--output-document" ||
          iequals(prev, "-OutFile") || prev == "-H" || prev == "-A" || prev == "-d") {
        continue;
      }
    }
    if (v.find('.') != std::string::npos) return v;
  }
  return {};
}

std::string url_basename(std::string_view url) {
  auto q = url.find_first_of("?#");
  if (q != std::string_view::npos) url = url.substr(0, q);
  auto scheme = url.find("://");
  if (scheme != std::string_view::npos) url = url.substr(scheme + 3);
  auto slash = url.find_last_of('/');
  if (slash == std::string_view::npos) return {};
  return std::string(url.substr(slash + 1));
}

// File the fetch writes its download to, if any.
std::string fetch_output(const Segment& seg) {
  auto idx = command_index(seg);
  if (!idx) return {};
  auto name = command_name(seg);
  bool is_wget = name == "wget";
  bool remote_name = false;
  std::string out;
  for (std::size_t i = *idx + 1; i < seg.words.size(); ++i) {
    const auto& v = seg.words[i].value;
    bool has_next = i + 1 < seg.words.size();
    if (name == "curl" && (v == "-o" || v == "--output") && has_next) {
      out = seg.words[++i].value;
    } else if (name == "curl" && v.starts_with("-o") && v.size() > 2 && v[1] == 'o') {
      out = v.substr(2);
    } else if (name == "curl" && (v == "-O" || v == "--remote-name")) {
      remote_name = true;
    } else if (is_wget && (v == "-O" || v == "--output-document") && has_next) {
      out = seg.words[++i].value;
    } else if (is_wget && v.starts_with("--output-document=")) {
      out = v.substr(18);
    } else if (iequals(v, "-OutFile") && has_next) {
      out = seg.words[++i].value;
    }
  }
  if (out == "-") return {};
  if (out.empty() && (remote_name || is_wget)) out = url_basename(fetch_url(seg));
  return out;
}

std::string normalize_path_word(std::string_view w) {
  while (w.starts_with("./")) w.remove_prefix(2);
  return std::string(w);
}

bool executes_file(const Segment& seg, const std::string& file) {
  auto idx = command_index(seg);
  if (!idx || file.empty()) return false;
  auto target = normalize_path_word(file);
  const auto& cmd = seg.words[*idx].value;
  if (normalize_path_word(cmd) == target && cmd != target) return true;
  if (cmd.find('/') != std::string::npos && normalize_path_word(cmd) == target) return true;
  auto name = command_name(seg);
  if (!is_eval_sink(name)) return false;
  for (std::size_t i = *idx + 1; i < seg.words.size(); ++i) {
    const auto& v = seg.words[i].value;
    if (v.starts_with("-")) continue;
    return normalize_path_word(v) == target;
  }
  return false;
}

// The command word itself is a substitution: its output runs as a command.
bool command_word_is_substitution(const Segment& seg) {
  auto idx = command_index(seg);
  if (!idx) return false;
  const auto& raw = seg.words[*idx].raw;
  return raw.starts_with("$(") || raw.starts_with("`") || raw.starts_with("\"$(") ||
         raw.starts_with("\"`");
}

bool consumes_substitution(const Segment& seg) {
  if (seg.substitutions.empty()) return false;
  // An inline script is analysed as its own unit.
  if (seg.wrapper && seg.wrapper->kind == WrapperKind::ShellInline) return false;
  return is_eval_sink(command_name(seg)) || command_word_is_substitution(seg);
}

// Index ranges [first, last] of pipelines.
std::vector<std::pair<std::size_t, std::size_t>> pipelines(const CommandAst& ast) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < ast.segments.size(); ++i) {
    if (ast.segments[i].connector_to_next != Connector::Pipe) {
      out.emplace_back(start, i);
      start = i + 1;
    }
  }
  return out;
}

// Source-to-sink pipelines: a segment matching `source` feeding a later
// interpreter in the same pipeline.
template <typename Pred, typename Emit>
void piped_into_interpreter(const CommandAst& ast, Pred source, Emit emit) {
  for (auto [first, last] : pipelines(ast)) {
    for (std::size_t k = first; k <= last; ++k) {
      if (!source(ast.segments[k])) continue;
      for (std::size_t j = k + 1; j <= last; ++j) {
        if (is_interpreter(command_name(ast.segments[j]))) {
          emit(k, j);
          break;
        }
      }
      break;
    }
  }
}

bool network_target(std::string_view target) {
  return target.starts_with("/dev/tcp/") || target.starts_with("/dev/udp/");
}

std::string describe_network_target(std::string_view target) {
  // /dev/tcp/HOST/PORT
  auto rest = target.substr(9);
  auto slash = rest.find('/');
  std::string host(rest.substr(0, slash));
  std::string port = slash == std::string_view::npos ? "" : std::string(rest.substr(slash + 1));
  std::string proto(target.substr(5, 3));
  return host + " port " + (port.empty() ? "?" : port) + " (" + proto + ")";
}

Finding make_finding(const ExecutionSurface& surface, const CommandHit& hit,
                     const RuleSettings& settings) {
  const Rule* rule = find_rule(hit.rule_id);
  Finding f;
  f.rule_id = hit.rule_id;
  f.severity = settings.severity(hit.rule_id);
  f.stage = rule ? rule->stage : AttackStage::Stage1bPayloadInjection;
  f.target_path = surface.target->relative_path;
  f.locator = surface.locator;
  f.evidence = literal_evidence(surface.target->text, trim(hit.excerpt),
                                surface.locator.span.begin, surface.locator.span,
                                f.evidence_truncated);
  f.message = hit.message;
  f.impact = surface.impact;
  f.remediation = rule ? rule->remediation : "";
  f.trigger = surface.trigger;
  return f;
}

bool is_payload_rule(std::string_view id) {
  return id == rule_ids::kExecStealth || id == rule_ids::kReverseShell ||
         id == rule_ids::kFetchExecute || id == rule_ids::kDecodeExecute;
}

std::vector<CommandHit> analyze_ast(const ExecutionSurface& surface, const CommandAst& root) {
  std::vector<CommandHit> hits;
  auto append = [&](std::vector<CommandHit> more) {
    for (auto& h : more) hits.push_back(std::move(h));
  };
  append(detect_chained_execution(surface, effective_ast(root)));
  for (const auto* unit : all_units(root)) {
    append(detect_exec_stealth(*unit));
    append(detect_reverse_shell(*unit));
    append(detect_fetch_execute(*unit));
    append(detect_decode_execute(*unit));
  }
  append(detect_interpreter_wrapper(surface, root));
  return hits;
}

}  // namespace

CommandAst surface_ast(const ExecutionSurface& surface) {
  if (!surface.shell_semantics && surface.argv) {
    std::vector<std::string> argv;
    for (const auto& a : *surface.argv) argv.push_back(strip_invisible(a));
    return flatten_wrappers(ast_from_argv(argv));
  }
  return flatten_wrappers(parse_text(strip_invisible(surface.command_text)));
}

bool is_single_launch_context(const ExecutionSurface& surface) {
  return surface.trigger == TriggerClass::McpServerStartup ||
         surface.trigger == TriggerClass::DebugLaunch ||
         (!surface.shell_semantics && surface.argv.has_value());
}

std::vector<CommandHit> detect_chained_execution(const ExecutionSurface& surface,
                                                 const CommandAst& effective) {
  if (!is_single_launch_context(surface)) return {};
  std::size_t subs = 0;
  for (const auto& seg : effective.segments) subs += seg.substitutions.size();
  if (effective.segments.size() < 2 && subs == 0) return {};
  std::string why = effective.segments.size() >= 2
                        ? std::to_string(effective.segments.size()) + " chained commands"
                        : "a command substitution";
  return {{std::string(rule_ids::kChainedExecution), effective.source,
           "single-launch command runs " + why + " instead of one program"}};
}

std::vector<CommandHit> detect_exec_stealth(const CommandAst& unit) {
  std::vector<CommandHit> out;
  const auto& segs = unit.segments;
  auto sequential = [](Connector c) { return c == Connector::And || c == Connector::Seq; };
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (!segs[i].is_exec_prefixed || !sequential(segs[i - 1].connector_to_next)) continue;
    std::size_t j = i - 1;
    while (j > 0 && sequential(segs[j - 1].connector_to_next)) --j;
    auto payload = span_text(unit, segs[j], segs[i - 1]);
    auto legit = segment_text(unit, segs[i]);
    out.push_back({std::string(rule_ids::kExecStealth), span_text(unit, segs[j], segs[i]),
                   "`" + payload + "` runs first, then `" + legit +
                       "` replaces the shell so the expected program appears normally"});
  }
  return out;
}

std::vector<CommandHit> detect_reverse_shell(const CommandAst& unit) {
  std::vector<CommandHit> out;
  const auto& segs = unit.segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& seg = segs[i];
    auto emit = [&](std::string excerpt, std::string message) {
      out.push_back({std::string(rule_ids::kReverseShell), std::move(excerpt), std::move(message)});
    };
    auto net = std::find_if(seg.redirections.begin(), seg.redirections.end(),
                            [](const Redirection& r) { return network_target(r.target); });
    if (net != seg.redirections.end()) {
      emit(segment_text(unit, seg),
           "stdio redirected to " + describe_network_target(net->target));
      continue;
    }
    auto name = command_name(seg);
    auto idx = command_index(seg);
    if (is_netcat(name) && idx) {
      bool exec_flag = false;
      bool shell_word = false;
      for (std::size_t k = *idx + 1; k < seg.words.size(); ++k) {
        const auto& v = seg.words[k].value;
        if (short_flag(v, 'e') || short_flag(v, 'c')) {
          exec_flag = true;
          // "-e/bin/sh" carries the program inline.
          if (v.size() > 2 && is_shell(basename_of(v.substr(2)))) shell_word = true;
        }
        auto b = basename_of(v);
        if (is_shell(b) || iequals(b, "cmd.exe") || iequals(b, "powershell")) shell_word = true;
      }
      if (exec_flag && shell_word) {
        emit(segment_text(unit, seg), name + " hands a shell to a remote peer");
        continue;
      }
    }
    if (is_shell(name) && idx) {
      bool interactive = false;
      for (std::size_t k = *idx + 1; k < seg.words.size(); ++k) {
        if (short_flag(seg.words[k].value, 'i')) interactive = true;
      }
      if (!interactive) continue;
      auto netty = [](const Segment& s) {
        auto n = command_name(s);
        return is_netcat(n) || n == "socat" || n == "telnet" || n == "openssl";
      };
      const Segment* peer = nullptr;
      if (i > 0 && segs[i - 1].connector_to_next == Connector::Pipe && netty(segs[i - 1])) {
        peer = &segs[i - 1];
      }
      if (i + 1 < segs.size() && seg.connector_to_next == Connector::Pipe && netty(segs[i + 1])) {
        peer = &segs[i + 1];
      }
      if (peer) {
        const Segment& first = peer < &seg ? *peer : seg;
        const Segment& last = peer < &seg ? seg : *peer;
        emit(span_text(unit, first, last),
             "interactive shell piped through " + command_name(*peer));
      }
    }
  }
  return out;
}

std::vector<CommandHit> detect_fetch_execute(const CommandAst& unit) {
  std::vector<CommandHit> out;
  const auto& segs = unit.segments;
  auto emit = [&](std::string excerpt, const std::string& url, const std::string& how) {
    out.push_back({std::string(rule_ids::kFetchExecute), std::move(excerpt),
                   "remote content" + (url.empty() ? std::string() : " from " + url) + " " + how});
  };

  piped_into_interpreter(unit, fetch_segment, [&](std::size_t k, std::size_t j) {
    emit(span_text(unit, segs[k], segs[j]), fetch_url(segs[k]),
         "is piped into " + command_name(segs[j]));
  });

  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (!fetch_segment(segs[k])) continue;
    auto file = fetch_output(segs[k]);
    if (file.empty()) continue;
    for (std::size_t j = k + 1; j < segs.size(); ++j) {
      auto c = segs[j - 1].connector_to_next;
      if (c != Connector::And && c != Connector::Seq) break;
      if (executes_file(segs[j], file)) {
        emit(span_text(unit, segs[k], segs[j]), fetch_url(segs[k]),
             "is saved to " + file + " and executed");
        break;
      }
    }
  }

  for (const auto& seg : segs) {
    if (!consumes_substitution(seg)) continue;
    for (const auto& sub : seg.substitutions) {
      if (!unit_contains(sub, fetch_segment)) continue;
      std::string url;
      for (const auto* u : all_units(sub)) {
        for (const auto& s : u->segments) {
          if (url.empty() && fetch_segment(s)) url = fetch_url(s);
        }
      }
      emit(segment_text(unit, seg), url, "is executed through a command substitution");
      break;
    }
  }
  return out;
}

std::vector<CommandHit> detect_decode_execute(const CommandAst& unit) {
  std::vector<CommandHit> out;
  const auto& segs = unit.segments;
  piped_into_interpreter(unit, is_decode, [&](std::size_t k, std::size_t j) {
    out.push_back({std::string(rule_ids::kDecodeExecute), span_text(unit, segs[k], segs[j]),
                   "decoded data from `" + segment_text(unit, segs[k]) + "` is piped into " +
                       command_name(segs[j])});
  });
  for (const auto& seg : segs) {
    if (!consumes_substitution(seg)) continue;
    for (const auto& sub : seg.substitutions) {
      if (!unit_contains(sub, is_decode)) continue;
      out.push_back({std::string(rule_ids::kDecodeExecute), segment_text(unit, seg),
                     "decoded data is executed through a command substitution"});
      break;
    }
  }
  return out;
}

std::vector<CommandHit> detect_interpreter_wrapper(const ExecutionSurface& surface,
                                                   const CommandAst& root) {
  if (surface.shell_semantics || !surface.argv) return {};
  if (surface.trigger != TriggerClass::McpServerStartup &&
      surface.trigger != TriggerClass::DebugLaunch) {
    return {};
  }
  const CommandAst* cur = &root;
  while (cur->segments.size() == 1 && cur->segments.front().wrapper) {
    const auto& w = *cur->segments.front().wrapper;
    if (w.kind == WrapperKind::ShellInline) {
      return {{std::string(rule_ids::kInterpreterWrapper), w.inline_script->source,
               "launch goes through `" + w.interpreter_word +
                   " -c` where a direct program is expected"}};
    }
    cur = w.inline_script.get();
  }
  return {};
}

std::vector<Finding> detect_persistence_trigger(const ExecutionSurface& surface,
                                                std::vector<Finding>& findings,
                                                const RuleSettings& settings) {
  if (!is_automatic_trigger(surface.trigger) ||
      !settings.enabled(rule_ids::kPersistenceTrigger)) {
    return {};
  }
  const Finding* first = nullptr;
  for (auto& f : findings) {
    if (!is_payload_rule(f.rule_id)) continue;
    f.severity = escalate(f.severity);
    if (!first) first = &f;
  }
  if (!first) return {};
  const Rule* rule = find_rule(rule_ids::kPersistenceTrigger);
  Finding r7 = *first;
  r7.rule_id = std::string(rule_ids::kPersistenceTrigger);
  r7.severity = settings.severity(rule_ids::kPersistenceTrigger);
  r7.stage = rule->stage;
  r7.remediation = rule->remediation;
  r7.message = "payload re-executes on every " + std::string(describe_trigger(surface.trigger));
  return {r7};
}

SurfaceAnalysis analyze_surface(const ExecutionSurface& surface, const RuleSettings& settings) {
  SurfaceAnalysis out;
  if (surface.advisory_only) return out;

  std::vector<CommandHit> hits;
  CommandAst root = surface_ast(surface);
  out.warnings = root.warnings;
  hits = analyze_ast(surface, root);

  if (surface.shell_semantics && surface.command_text.find('\n') != std::string::npos) {
    // Line by line as well, so one malformed line cannot hide the rest.
    for (const auto& line : split_lines(surface.command_text)) {
      auto t = trim(line.text);
      if (t.empty() || t.front() == '#') continue;
      CommandAst line_ast = flatten_wrappers(parse_text(strip_invisible(t)));
      for (auto& h : analyze_ast(surface, line_ast)) hits.push_back(std::move(h));
    }
  }

  std::set<std::tuple<std::string, std::string, std::size_t>> seen;
  for (const auto& hit : hits) {
    if (!settings.enabled(hit.rule_id)) continue;
    Finding f = make_finding(surface, hit, settings);
    if (!seen.emplace(f.rule_id, f.evidence, f.locator.span.begin).second) continue;
    out.findings.push_back(std::move(f));
  }
  std::stable_sort(out.findings.begin(), out.findings.end(),
                   [](const Finding& a, const Finding& b) { return a.rule_id < b.rule_id; });
  for (auto& r7 : detect_persistence_trigger(surface, out.findings, settings)) {
    out.findings.push_back(std::move(r7));
  }
  std::stable_sort(out.findings.begin(), out.findings.end(),
                   [](const Finding& a, const Finding& b) { return a.rule_id < b.rule_id; });
  return out;
}

}  // namespace nestguard::shell
