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

#include "nestguard/report/scanner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nestguard/core/text.hpp"
#include "nestguard/shell/rules.hpp"

namespace nestguard::report {
namespace fs = std::filesystem;

namespace {

void extend(std::vector<std::string>& dst, const nlohmann::json& value, std::string_view key) {
  if (!value.is_array()) throw ConfigError(std::string(key) + " must be an array of strings");
  for (const auto& v : value) {
    if (!v.is_string()) throw ConfigError(std::string(key) + " must be an array of strings");
    auto s = v.get<std::string>();
    if (std::find(dst.begin(), dst.end(), s) == dst.end()) dst.push_back(std::move(s));
  }
}

Finding unanalyzable(const ScanTarget& target, const ExtractionResult& ex,
                     const RuleSettings& settings) {
  const Rule* rule = find_rule(rule_ids::kUnanalyzableConfig);
  Finding f;
  f.rule_id = std::string(rule_ids::kUnanalyzableConfig);
  f.severity = settings.severity(f.rule_id);
  f.stage = rule->stage;
  f.target_path = target.relative_path;
  // The whole line holding the error is the evidence.
  auto lines = split_lines(target.text);
  std::size_t b = 0;
  std::size_t e = target.text.size();
  if (ex.error_span.line >= 1 && ex.error_span.line <= lines.size()) {
    const auto& line = lines[ex.error_span.line - 1];
    b = line.offset;
    e = line.offset + line.text.size();
  }
  f.locator = {"document", target.lines.span(b, e)};
  std::string_view slice = std::string_view(target.text).substr(b, e - b);
  auto cut = utf8_prefix(slice, kMaxEvidenceBytes);
  f.evidence = std::string(cut);
  f.evidence_truncated = cut.size() < slice.size();
  f.message = "cannot parse: " + *ex.parse_error;
  f.impact = classify_impact(target.format);
  f.trigger = profile_for(target.format).trigger;
  f.remediation = rule->remediation;
  return f;
}

void append(std::vector<Finding>& dst, std::vector<Finding> src) {
  dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

}  // namespace

RuleConfig parse_rule_config(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("rule config is not valid JSON");
  if (!j.is_object()) throw ConfigError("rule config must be a JSON object");
  RuleConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (find_rule(key)) {
      if (!value.is_object()) throw ConfigError(key + " must map to an object");
      for (const auto& [field, v] : value.items()) {
        if (field == "enabled") {
          if (!v.is_boolean()) throw ConfigError(key + ".enabled must be a boolean");
          cfg.settings.set_enabled(key, v.get<bool>());
        } else if (field == "severity") {
          auto sev = v.is_string() ? parse_severity(v.get<std::string>()) : std::nullopt;
          if (!sev) throw ConfigError(key + ".severity must be one of info|low|medium|high|critical");
          cfg.settings.set_severity(key, *sev);
        } else {
          throw ConfigError("unknown field " + key + "." + field);
        }
      }
    } else if (key == "imperatives") {
      extend(cfg.lexicons.imperatives, value, key);
    } else if (key == "command_words") {
      extend(cfg.lexicons.command_words, value, key);
    } else if (key == "fetch_words") {
      extend(cfg.lexicons.fetch_words, value, key);
    } else if (key == "sensitive_files") {
      extend(cfg.lexicons.sensitive_files, value, key);
    } else if (key == "domain_allowlist") {
      extend(cfg.lexicons.domain_allowlist, value, key);
    } else if (key == "context_tokens") {
      extend(cfg.context_tokens, value, key);
    } else if (key == "settings_command_keys") {
      extend(cfg.extractor.extra_settings_command_keys, value, key);
    } else if (key == "launch_keys") {
      extend(cfg.extractor.extra_launch_keys, value, key);
    } else {
      throw ConfigError("unknown rule or key: " + key);
    }
  }
  return cfg;
}

RuleConfig load_rule_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read rule config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rule_config(buf.str());
}

std::vector<std::string> gather_context_tokens(const fs::path& root,
                                               const std::vector<std::string>& names,
                                               const std::vector<std::string>& extra) {
  std::vector<std::string> out;
  auto add = [&](const std::string& t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  std::error_code ec;
  auto canonical = fs::weakly_canonical(fs::absolute(root), ec);
  auto dir = (ec ? root : canonical).filename().string();
  for (const auto& t : doc::context_tokens_from(dir)) add(t);
  for (const auto& n : names) {
    for (const auto& t : doc::context_tokens_from(n)) add(t);
  }
  for (const auto& e : extra) add(ascii_lower(e));
  return out;
}

ScanResult scan_tree(const fs::path& root, const ScanOptions& options) {
  const auto& cfg = options.config;
  auto discovered = discover_targets(root, options.include_docs);
  ScanResult result;
  result.warnings = std::move(discovered.warnings);
  result.targets_scanned = discovered.targets.size();

  std::vector<TargetRef> docs;
  std::vector<TargetRef> configs;
  std::vector<std::string> names;
  for (const auto& target : discovered.targets) {
    if (is_document_format(target->format)) {
      docs.push_back(target);
      continue;
    }
    configs.push_back(target);
    auto ex = extract_surfaces(target, cfg.extractor);
    for (auto& w : ex.warnings) result.warnings.push_back(std::move(w));
    names.insert(names.end(), ex.context_names.begin(), ex.context_names.end());
    if (ex.parse_error) {
      if (cfg.settings.enabled(rule_ids::kUnanalyzableConfig)) {
        result.findings.push_back(unanalyzable(*target, ex, cfg.settings));
      }
      continue;
    }
    for (auto& surface : ex.surfaces) {
      auto analysis = shell::analyze_surface(surface, cfg.settings);
      for (auto& w : analysis.warnings) {
        result.warnings.push_back({target->relative_path, surface.locator.path + ": " + w});
      }
      append(result.findings, std::move(analysis.findings));
      if (!surface.advisory_only) {
        ++result.surfaces_analyzed;
        result.surfaces.push_back(std::move(surface));
      }
    }
  }

  result.context_tokens = gather_context_tokens(root, names, cfg.context_tokens);
  for (const auto& target : configs) {
    append(result.findings, doc::scan_invisible_unicode(*target, cfg.settings));
    append(result.findings,
           doc::detect_lookalike_domains(*target, result.context_tokens, cfg.lexicons, cfg.settings));
  }
  for (const auto& target : docs) {
    append(result.findings, doc::scan_invisible_unicode(*target, cfg.settings));
    auto regions = doc::extract_hidden_regions(*target);
    append(result.findings,
           doc::detect_hidden_instructions(*target, regions, cfg.lexicons, cfg.settings));
    append(result.findings,
           doc::detect_lookalike_domains(*target, result.context_tokens, cfg.lexicons, cfg.settings));
    append(result.findings,
           doc::detect_config_write_instructions(*target, cfg.lexicons, cfg.settings));
  }
  return result;
}

}  // namespace nestguard::report
