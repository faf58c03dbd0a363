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

#ifndef NESTGUARD_SRC_EXTRACT_SURFACE_BUILDER_HPP
#define NESTGUARD_SRC_EXTRACT_SURFACE_BUILDER_HPP

#include <string>
#include <vector>

#include "nestguard/extract/extractors.hpp"

namespace nestguard::detail {

/// Shared by the per-format extractors: stamps trigger/impact from the
/// target's profile and converts byte ranges into spans.
class SurfaceBuilder {
 public:
  SurfaceBuilder(const TargetRef& target, ExtractionResult& out)
      : target_(target), out_(out), profile_(profile_for(target->format)) {}

  void add_command(std::string locator, std::size_t begin, std::size_t end,
                   std::string command_text) {
    auto trimmed = trim(command_text);
    if (trimmed.empty()) return;
    ExecutionSurface s = base(std::move(locator), begin, end);
    s.command_text = std::string(trimmed);
    s.shell_semantics = true;
    out_.surfaces.push_back(std::move(s));
  }

  void add_argv(std::string locator, std::size_t begin, std::size_t end,
                std::vector<std::string> argv, bool shell_semantics = false) {
    if (argv.empty() || trim(argv.front()).empty()) return;
    ExecutionSurface s = base(std::move(locator), begin, end);
    s.command_text = join(argv);
    s.argv = std::move(argv);
    s.shell_semantics = shell_semantics;
    out_.surfaces.push_back(std::move(s));
  }

  ExecutionSurface& last() { return out_.surfaces.back(); }

  void warn(std::string message) {
    out_.warnings.push_back({target_->relative_path, std::move(message)});
  }

  static std::string join(const std::vector<std::string>& argv) {
    std::string out;
    for (const auto& a : argv) {
      if (!out.empty()) out.push_back(' ');
      out += a;
    }
    return out;
  }

 private:
  ExecutionSurface base(std::string locator, std::size_t begin, std::size_t end) {
    ExecutionSurface s;
    s.target = target_;
    s.locator = {std::move(locator), target_->lines.span(begin, end)};
    s.trigger = profile_.trigger;
    s.impact = profile_.impact;
    return s;
  }

  const TargetRef& target_;
  ExtractionResult& out_;
  const FormatProfile& profile_;
};

}  // namespace nestguard::detail

#endif  // NESTGUARD_SRC_EXTRACT_SURFACE_BUILDER_HPP
