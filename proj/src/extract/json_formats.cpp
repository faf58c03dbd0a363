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

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "nestguard/extract/extractors.hpp"
#include "surface_builder.hpp"

namespace nestguard {
namespace {

using detail::SurfaceBuilder;

std::string child_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "/" + std::string(key);
}

// Scalars become their literal text; containers have no argv meaning.
std::optional<std::string> coerce_arg(const JsonValue& v) {
  switch (v.kind) {
    case JsonValue::Kind::String:
    case JsonValue::Kind::Number:
    case JsonValue::Kind::Bool:
      return v.text;
    default:
      return std::nullopt;
  }
}

bool has_space(std::string_view s) {
  return s.find_first_of(" \t\n") != std::string_view::npos;
}

std::string shell_quote_if_needed(const std::string& arg) {
  if (!has_space(arg) || arg.empty()) return arg;
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out += "'";
  return out;
}

void add_mcp_server(SurfaceBuilder& b, const std::string& locator, const std::string& name,
                    const JsonValue& entry) {
  const JsonValue* command = entry.find("command");
  if (command == nullptr || !command->is_string() || trim(command->text).empty()) {
    b.warn("MCP server '" + name + "' has no command");
    return;
  }
  std::vector<std::string> argv{command->text};
  const JsonValue* args = entry.find("args");
  if (args != nullptr && args->is_array()) {
    for (std::size_t i = 0; i < args->items.size(); ++i) {
      const auto& item = args->items[i];
      if (!item.is_string()) {
        b.warn("MCP server '" + name + "' args[" + std::to_string(i) + "] is not a string");
      }
      if (auto text = coerce_arg(item)) argv.push_back(*text);
    }
  } else if (args != nullptr) {
    b.warn("MCP server '" + name + "' args is not an array");
  }
  // A lone command containing whitespace only makes sense to a client that
  // hands it to a shell; analyse it as shell text.
  bool via_shell = argv.size() == 1 && has_space(command->text);
  if (via_shell) {
    b.add_command(locator, entry.begin, entry.end, command->text);
  } else {
    b.add_argv(locator, entry.begin, entry.end, std::move(argv));
  }
}

void add_lifecycle_value(SurfaceBuilder& b, const std::string& locator, const JsonValue& v) {
  if (v.is_string()) {
    b.add_command(locator, v.begin, v.end, v.text);
  } else if (v.is_array()) {
    std::vector<std::string> argv;
    for (const auto& item : v.items) {
      if (auto text = coerce_arg(item)) argv.push_back(*text);
    }
    b.add_argv(locator, v.begin, v.end, std::move(argv));
  }
}

void add_task(SurfaceBuilder& b, const std::string& locator, const JsonValue& task,
              const JsonValue* inherited_type) {
  const JsonValue* type = task.find("type");
  if (type == nullptr) type = inherited_type;
  bool process = type != nullptr && type->is_string() && type->text == "process";

  const JsonValue* command = task.find("command");
  std::optional<std::string> command_text;
  if (command != nullptr) {
    if (command->is_string()) {
      command_text = command->text;
    } else if (const JsonValue* value = command->find("value"); value && value->is_string()) {
      command_text = value->text;
    }
  }
  if (command_text) {
    std::vector<std::string> argv{*command_text};
    if (const JsonValue* args = task.find("args"); args && args->is_array()) {
      for (const auto& a : args->items) {
        if (auto text = coerce_arg(a)) {
          argv.push_back(*text);
        } else if (const JsonValue* value = a.find("value"); value && value->is_string()) {
          argv.push_back(value->text);
        }
      }
    }
    if (process) {
      b.add_argv(child_path(locator, "command"), task.begin, task.end, std::move(argv));
    } else if (argv.size() == 1) {
      b.add_command(child_path(locator, "command"), task.begin, task.end, *command_text);
    } else {
      std::string text = *command_text;
      for (std::size_t i = 1; i < argv.size(); ++i) text += " " + shell_quote_if_needed(argv[i]);
      b.add_argv(child_path(locator, "command"), task.begin, task.end, std::move(argv), true);
      b.last().command_text = text;
    }
  }

  if (const JsonValue* options = task.find("options")) {
    if (const JsonValue* shell = options->find("shell")) {
      const JsonValue* exe = shell->find("executable");
      if (exe != nullptr && exe->is_string()) {
        std::vector<std::string> argv{exe->text};
        if (const JsonValue* args = shell->find("args"); args && args->is_array()) {
          for (const auto& a : args->items) {
            if (auto text = coerce_arg(a)) argv.push_back(*text);
          }
        }
        b.add_argv(child_path(locator, "options/shell/executable"), shell->begin, shell->end,
                   std::move(argv));
      }
    }
  }

  for (std::string_view os : {"linux", "osx", "windows"}) {
    if (const JsonValue* platform = task.find(os); platform && platform->is_object()) {
      add_task(b, child_path(locator, os), *platform, type);
    }
  }
}

void walk_launch(SurfaceBuilder& b, const std::string& locator, const JsonValue& v,
                 const ExtractorOptions& options) {
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.items.size(); ++i) {
      walk_launch(b, child_path(locator, std::to_string(i)), v.items[i], options);
    }
    return;
  }
  if (!v.is_object()) return;

  auto string_args = [](const JsonValue* args) {
    std::vector<std::string> out;
    if (args != nullptr && args->is_array()) {
      for (const auto& a : args->items) {
        if (auto text = coerce_arg(a)) out.push_back(*text);
      }
    }
    return out;
  };

  for (const auto& m : v.members) {
    auto path = child_path(locator, m.key);
    if (m.value.is_string()) {
      if (m.key == "runtimeExecutable") {
        std::vector<std::string> argv{m.value.text};
        auto extra = string_args(v.find("runtimeArgs"));
        argv.insert(argv.end(), extra.begin(), extra.end());
        b.add_argv(path, m.value.begin, m.value.end, std::move(argv));
      } else if (m.key == "program") {
        std::vector<std::string> argv{m.value.text};
        auto extra = string_args(v.find("args"));
        argv.insert(argv.end(), extra.begin(), extra.end());
        b.add_argv(path, m.value.begin, m.value.end, std::move(argv));
      } else if (m.key == "preLaunchTask") {
        b.add_command(path, m.value.begin, m.value.end, m.value.text);
        if (!trim(m.value.text).empty()) b.last().advisory_only = true;
      } else if (std::find(options.extra_launch_keys.begin(), options.extra_launch_keys.end(),
                           m.key) != options.extra_launch_keys.end()) {
        b.add_command(path, m.value.begin, m.value.end, m.value.text);
      }
    } else {
      walk_launch(b, path, m.value, options);
    }
  }
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

void add_terminal_profile(SurfaceBuilder& b, const std::string& locator,
                          const JsonValue& profile) {
  if (!profile.is_object()) return;
  const JsonValue* path = profile.find("path");
  std::string exe;
  if (path != nullptr && path->is_string()) {
    exe = path->text;
  } else if (path != nullptr && path->is_array() && !path->items.empty() &&
             path->items.front().is_string()) {
    exe = path->items.front().text;
  }
  if (exe.empty()) return;
  std::vector<std::string> argv{exe};
  if (const JsonValue* args = profile.find("args"); args && args->is_array()) {
    for (const auto& a : args->items) {
      if (auto text = coerce_arg(a)) argv.push_back(*text);
    }
  } else if (args && args->is_string()) {
    argv.push_back(args->text);
  }
  b.add_argv(locator, profile.begin, profile.end, std::move(argv));
}

void walk_settings(SurfaceBuilder& b, const std::string& locator, const JsonValue& v,
                   const ExtractorOptions& options) {
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.items.size(); ++i) {
      walk_settings(b, child_path(locator, std::to_string(i)), v.items[i], options);
    }
    return;
  }
  if (!v.is_object()) return;
  for (const auto& m : v.members) {
    auto path = child_path(locator, m.key);
    if (starts_with(m.key, "terminal.integrated.profiles.") && m.value.is_object()) {
      for (const auto& profile : m.value.members) {
        add_terminal_profile(b, child_path(path, profile.key), profile.value);
      }
      continue;
    }
    if (starts_with(m.key, "terminal.integrated.automationProfile.")) {
      add_terminal_profile(b, path, m.value);
      continue;
    }
    bool command_key = m.key == "command" || ends_with(m.key, ".command") ||
                       std::find(options.extra_settings_command_keys.begin(),
                                 options.extra_settings_command_keys.end(),
                                 m.key) != options.extra_settings_command_keys.end();
    if (command_key && m.value.is_string()) {
      b.add_command(path, m.value.begin, m.value.end, m.value.text);
    } else if (command_key && m.value.is_array()) {
      std::vector<std::string> argv;
      for (const auto& a : m.value.items) {
        if (auto text = coerce_arg(a)) argv.push_back(*text);
      }
      b.add_argv(path, m.value.begin, m.value.end, std::move(argv));
    } else {
      walk_settings(b, path, m.value, options);
    }
  }
}

}  // namespace

ExtractionResult extract_mcp(const TargetRef& target, const JsonValue& document) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  if (!document.is_object()) {
    b.warn("no MCP server entries");
    return out;
  }
  const JsonValue* servers = &document;
  std::string prefix;
  for (std::string_view wrapper : {"mcpServers", "servers"}) {
    if (const JsonValue* w = document.find(wrapper); w && w->is_object()) {
      servers = w;
      prefix = std::string(wrapper);
      break;
    }
  }
  bool any = false;
  for (const auto& m : servers->members) {
    if (!m.value.is_object()) continue;
    any = true;
    out.context_names.push_back(m.key);
    add_mcp_server(b, child_path(prefix, m.key), m.key, m.value);
  }
  if (!any) b.warn("no MCP server entries");
  return out;
}

ExtractionResult extract_devcontainer(const TargetRef& target, const JsonValue& document) {
  static constexpr std::array kLifecycleKeys = {
      "initializeCommand", "onCreateCommand",   "updateContentCommand",
      "postCreateCommand", "postStartCommand", "postAttachCommand"};
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  if (!document.is_object()) return out;
  // Document order, not lexicon order.
  for (const auto& m : document.members) {
    if (std::find(kLifecycleKeys.begin(), kLifecycleKeys.end(), m.key) == kLifecycleKeys.end()) {
      continue;
    }
    if (m.value.is_object()) {
      for (const auto& named : m.value.members) {
        add_lifecycle_value(b, m.key + "/" + named.key, named.value);
      }
    } else {
      add_lifecycle_value(b, m.key, m.value);
    }
  }
  return out;
}

ExtractionResult extract_tasks(const TargetRef& target, const JsonValue& document) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  if (!document.is_object()) return out;
  // Version 0.1.0 files put a global command at the top level.
  if (document.find("command") != nullptr || document.find("options") != nullptr) {
    add_task(b, "", document, nullptr);
  }
  if (const JsonValue* tasks = document.find("tasks"); tasks && tasks->is_array()) {
    for (std::size_t i = 0; i < tasks->items.size(); ++i) {
      if (tasks->items[i].is_object()) {
        add_task(b, "tasks/" + std::to_string(i), tasks->items[i], nullptr);
      }
    }
  }
  return out;
}

ExtractionResult extract_launch(const TargetRef& target, const JsonValue& document,
                                const ExtractorOptions& options) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  walk_launch(b, "", document, options);
  return out;
}

ExtractionResult extract_settings(const TargetRef& target, const JsonValue& document,
                                  const ExtractorOptions& options) {
  ExtractionResult out;
  SurfaceBuilder b(target, out);
  walk_settings(b, "", document, options);
  return out;
}

}  // namespace nestguard
