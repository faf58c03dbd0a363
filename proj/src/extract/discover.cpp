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
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include "nestguard/core/glob.hpp"
#include "nestguard/extract/extractors.hpp"

namespace nestguard {
namespace fs = std::filesystem;

namespace {

constexpr std::uintmax_t kMaxFileBytes = 8u << 20;
constexpr std::size_t kBinarySniffBytes = 8192;

ConfigFormat doc_format(std::string_view relative_path) {
  auto slash = relative_path.rfind('/');
  auto name = ascii_lower(slash == std::string_view::npos
                              ? relative_path
                              : relative_path.substr(slash + 1));
  auto ends_with = [&](std::string_view suffix) {
    return name.size() > suffix.size() &&
           name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".md") || ends_with(".markdown")) return ConfigFormat::MarkdownDoc;
  if (ends_with(".html") || ends_with(".htm")) return ConfigFormat::HtmlDoc;
  return ConfigFormat::Unknown;
}

std::vector<std::string> read_ignore_patterns(const fs::path& root) {
  std::vector<std::string> patterns;
  std::ifstream in(root / ".nestguardignore");
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.back() == '/') t.remove_suffix(1);
    patterns.emplace_back(t);
  }
  return patterns;
}

bool is_ignored(const std::vector<std::string>& patterns, std::string_view rel) {
  for (const auto& p : patterns) {
    // A pattern that matches an ancestor directory hides the whole subtree.
    std::size_t cut = rel.size();
    while (true) {
      if (glob_match(p, rel.substr(0, cut))) return true;
      auto slash = rel.rfind('/', cut == 0 ? 0 : cut - 1);
      if (slash == std::string_view::npos || cut == 0) break;
      cut = slash;
    }
  }
  return false;
}

struct Candidate {
  std::string relative;
  fs::path path;
  ConfigFormat format;
};

void walk(const fs::path& dir, const std::string& rel_prefix,
          const std::vector<std::string>& ignore, bool include_docs,
          std::vector<Candidate>& out, std::vector<Warning>& warnings) {
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) {
    warnings.push_back({rel_prefix.empty() ? "." : rel_prefix,
                        "cannot read directory: " + ec.message()});
    return;
  }
  for (const auto& entry : it) {
    auto name = entry.path().filename().string();
    auto rel = rel_prefix.empty() ? name : rel_prefix + "/" + name;
    std::error_code st_ec;
    auto status = entry.symlink_status(st_ec);
    if (st_ec || fs::is_symlink(status)) continue;
    if (is_ignored(ignore, rel)) continue;
    if (fs::is_directory(status)) {
      if (name == ".git") continue;
      walk(entry.path(), rel, ignore, include_docs, out, warnings);
      continue;
    }
    if (!fs::is_regular_file(status)) continue;
    auto format = match_profile(rel);
    if (format == ConfigFormat::Unknown && include_docs) format = doc_format(rel);
    if (format == ConfigFormat::Unknown) continue;
    out.push_back({rel, entry.path(), format});
  }
}

}  // namespace

std::shared_ptr<const ScanTarget> ScanTarget::from_bytes(std::string relative_path,
                                                         ConfigFormat format,
                                                         std::string raw,
                                                         fs::path path) {
  auto t = std::make_shared<ScanTarget>();
  t->path = path.empty() ? fs::path(relative_path) : std::move(path);
  t->relative_path = std::move(relative_path);
  t->format = format;
  auto decoded = decode_utf8_lossy(raw);
  t->raw = std::move(raw);
  t->text = std::move(decoded.text);
  t->invalid_sequences = decoded.invalid_sequences;
  t->first_invalid_offset = decoded.first_invalid_offset;
  t->lines = LineIndex(t->text);
  return t;
}

DiscoveryResult discover_targets(const fs::path& root, bool include_docs) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw ScanRootError("scan root is not a readable directory: " + root.string());
  }
  fs::directory_iterator probe(root, ec);
  if (ec) throw ScanRootError("cannot read scan root " + root.string() + ": " + ec.message());

  DiscoveryResult result;
  std::vector<Candidate> candidates;
  walk(root, "", read_ignore_patterns(root), include_docs, candidates, result.warnings);
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.relative < b.relative; });

  for (auto& c : candidates) {
    std::error_code size_ec;
    auto size = fs::file_size(c.path, size_ec);
    if (!size_ec && size > kMaxFileBytes) {
      result.warnings.push_back({c.relative, "file larger than 8 MiB skipped"});
      continue;
    }
    std::ifstream in(c.path, std::ios::binary);
    if (!in) {
      result.warnings.push_back({c.relative, "cannot read file"});
      continue;
    }
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
      result.warnings.push_back({c.relative, "read error"});
      continue;
    }
    if (raw.substr(0, kBinarySniffBytes).find('\0') != std::string::npos) {
      result.warnings.push_back({c.relative, "binary file skipped"});
      continue;
    }
    result.targets.push_back(
        ScanTarget::from_bytes(c.relative, c.format, std::move(raw), c.path));
  }
  return result;
}

}  // namespace nestguard
