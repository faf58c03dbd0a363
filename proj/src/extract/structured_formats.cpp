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

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <string>
#include <vector>

#include "nestguard/extract/extractors.hpp"
#include "nestguard/extract/toml_reader.hpp"
#include "nestguard/extract/xml_reader.hpp"
#include "surface_builder.hpp"

namespace nestguard {
namespace {

using detail::SurfaceBuilder;

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Byte range covering the lines a YAML scalar occupies, starting at its mark.
std::pair<std::size_t, std::size_t> yaml_scalar_range(const ScanTarget& t, const YAML::Mark& mark,
                                                      const std::string& value) {
  std::size_t begin = mark.pos < 0 ? 0 : static_cast<std::size_t>(mark.pos);
  begin = std::min(begin, t.text.size());
  std::size_t newlines = static_cast<std::size_t>(std::count(value.begin(), value.end(), '\n'));
  // Block scalars start on the indicator line; their content follows.
  bool block = begin < t.text.size() && (t.text[begin] == '|' || t.text[begin] == '>');
  auto first_line = t.lines.line_of(begin);
  auto last_line = first_line + newlines + (block && newlines == 0 ? 1 : 0);
  if (block && !value.empty() && value.back() == '\n') last_line = first_line + newlines;
  auto end = t.lines.line_start(last_line + 1);
  if (end > t.text.size()) end = t.text.size();
  while (end > begin && (t.text[end - 1] == '\n' || t.text[end - 1] == '\r')) --end;
  return {begin, std::max(begin, end)};
}

std::string dotted(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (p.starts_with("[")) {
      out += p;
      continue;
    }
    if (!out.empty()) out.push_back('.');
    out += p;
  }
  return out;
}

void collect_pom(SurfaceBuilder& b, const XmlElement& el, const std::string& path,
                 std::vector<const XmlElement*>& consumed) {
  auto here = path.empty() ? el.name : path + "/" + el.name;

  if (const XmlElement* exe = el.child("executable")) {
    std::vector<std::string> argv{std::string(trim(exe->text))};
    consumed.push_back(exe);
    auto take_arguments = [&](const XmlElement& holder) {
      for (const auto& c : holder.children) {
        if (c.name == "argument") {
          argv.emplace_back(trim(c.text));
          consumed.push_back(&c);
        }
      }
    };
    take_arguments(el);
    if (const XmlElement* args = el.child("arguments")) take_arguments(*args);
    b.add_argv(here + "/executable", el.begin, el.end, std::move(argv));
  }

  for (const auto& c : el.children) {
    if (std::find(consumed.begin(), consumed.end(), &c) != consumed.end()) continue;
    auto child_here = here + "/" + c.name;
    if (c.name == "exec") {
      auto exe_attr = std::find_if(c.attributes.begin(), c.attributes.end(),
                                   [](const auto& a) { return a.first == "executable"; });
      if (exe_attr != c.attributes.end()) {
        std::vector<std::string> argv{exe_attr->second};
        for (const auto& arg : c.children) {
          if (arg.name != "arg") continue;
          for (const auto& [k, v] : arg.attributes) {
            if (k == "value") argv.push_back(v);
            if (k == "line") argv.push_back(v);
          }
        }
        b.add_argv(child_here, c.begin, c.end, std::move(argv));
      } else {
        b.add_command(child_here, c.begin, c.end, c.text);
      }
      continue;
    }
    if (c.name == "commandlineArgs" || c.name == "argument" || c.name == "executable") {
      b.add_command(child_here, c.begin, c.end, c.text);
      continue;
    }
    collect_pom(b, c, here, consumed);
  }
}

}  // namespace

ExtractionResult extract_workflow(const TargetRef& target) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  YAML::Node doc = YAML::Load(target->text);
  if (!doc.IsMap()) return out;
  YAML::Node jobs = doc["jobs"];
  if (!jobs || !jobs.IsMap()) return out;
  for (const auto& job : jobs) {
    auto job_id = job.first.as<std::string>("");
    const YAML::Node& body = job.second;
    if (!body.IsMap()) continue;
    YAML::Node steps = body["steps"];
    if (!steps || !steps.IsSequence()) continue;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      YAML::Node step = steps[i];
      if (!step.IsMap()) continue;
      YAML::Node run = step["run"];
      if (!run || !run.IsScalar()) continue;
      auto value = run.Scalar();
      auto [begin, end] = yaml_scalar_range(*target, run.Mark(), value);
      b.add_command("jobs/" + job_id + "/steps/" + std::to_string(i) + "/run", begin, end,
                    value);
    }
  }
  return out;
}

ExtractionResult extract_pyproject(const TargetRef& target) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  for (auto& leaf : read_toml_strings(target->text)) {
    const auto& p = leaf.path;
    if ((p.size() == 2 && p[0] == "project" && p[1] == "name") ||
        (p.size() == 3 && p[0] == "tool" && p[1] == "poetry" && p[2] == "name")) {
      out.context_names.push_back(leaf.value);
    }
    bool under_scripts = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (ends_with(p[i], "scripts") || ends_with(p[i], "tasks")) under_scripts = true;
    }
    if (!under_scripts) continue;
    const auto& key = p.back();
    if (key == "help" || key == "description") continue;
    b.add_command(dotted(p), leaf.begin, leaf.end, leaf.value);
  }
  return out;
}

ExtractionResult extract_pom(const TargetRef& target) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  XmlElement root = parse_xml(target->text);
  if (const XmlElement* artifact = root.child("artifactId")) {
    auto name = trim(artifact->text);
    if (!name.empty()) out.context_names.emplace_back(name);
  }
  std::vector<const XmlElement*> consumed;
  collect_pom(b, root, "", consumed);
  // Element order in the tree can differ from document order when an
  // executable and its arguments are grouped.
  std::stable_sort(out.surfaces.begin(), out.surfaces.end(),
                   [](const ExecutionSurface& x, const ExecutionSurface& y) {
                     return x.locator.span.begin < y.locator.span.begin;
                   });
  return out;
}

ExtractionResult extract_surfaces(const TargetRef& target, const ExtractorOptions& options) {
  ExtractionResult out;
  auto record_error = [&](const std::string& what, std::size_t offset) {
    out = ExtractionResult{};
    out.parse_error = what;
    offset = std::min(offset, target->text.size());
    out.error_span = target->lines.span(offset, offset);
  };

  try {
    switch (target->format) {
      case ConfigFormat::McpJson:
      case ConfigFormat::DevContainer:
      case ConfigFormat::VsCodeTasks:
      case ConfigFormat::VsCodeLaunch:
      case ConfigFormat::VsCodeSettings: {
        auto doc = parse_json(strip_jsonc(target->text));
        switch (target->format) {
          case ConfigFormat::McpJson: return extract_mcp(target, doc);
          case ConfigFormat::DevContainer: return extract_devcontainer(target, doc);
          case ConfigFormat::VsCodeTasks: return extract_tasks(target, doc);
          case ConfigFormat::VsCodeLaunch: return extract_launch(target, doc, options);
          default: return extract_settings(target, doc, options);
        }
      }
      case ConfigFormat::GithubWorkflow: return extract_workflow(target);
      case ConfigFormat::Makefile: return extract_makefile(target);
      case ConfigFormat::PyProject: return extract_pyproject(target);
      case ConfigFormat::MavenPom: return extract_pom(target);
      case ConfigFormat::GradleBuild: return extract_gradle(target);
      case ConfigFormat::ShellRc: return extract_shellrc(target);
      case ConfigFormat::MarkdownDoc:
      case ConfigFormat::HtmlDoc:
      case ConfigFormat::Unknown:
        return out;
    }
  } catch (const JsonParseError& e) {
    record_error(e.what(), e.offset());
  } catch (const TomlParseError& e) {
    record_error(e.what(), e.offset());
  } catch (const XmlParseError& e) {
    record_error(e.what(), e.offset());
  } catch (const YAML::Exception& e) {
    auto pos = e.mark.pos < 0 ? 0 : static_cast<std::size_t>(e.mark.pos);
    record_error(e.what(), pos);
  }
  return out;
}

}  // namespace nestguard
