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

#ifndef NESTGUARD_DOC_DOC_ANALYSIS_HPP
#define NESTGUARD_DOC_DOC_ANALYSIS_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nestguard/core/model.hpp"
#include "nestguard/core/unicode.hpp"
#include "nestguard/extract/extractors.hpp"

namespace nestguard::doc {

/// Word lists behind D2–D4. Defaults are built in; the rule-config file can
/// extend them.
struct Lexicons {
  std::vector<std::string> imperatives;
  std::vector<std::string> command_words;
  std::vector<std::string> fetch_words;
  std::vector<std::string> sensitive_files;
  std::vector<std::string> domain_allowlist;

  static Lexicons defaults();
};

struct CodepointReport {
  char32_t codepoint = 0;  // first one seen of the class
  InvisibleClass cls = InvisibleClass::ZeroWidth;
  std::size_t count = 0;
  SourceSpan first_span;
};

/// Per-class counts over the target text, in class order. Invalid byte
/// sequences recorded at decode time form their own class.
std::vector<CodepointReport> invisible_codepoints(const ScanTarget& target);

enum class RegionKind { HtmlComment, NonRenderedElement, Metadata };

struct HiddenRegion {
  RegionKind kind = RegionKind::HtmlComment;
  SourceSpan span;             // raw source of the whole region
  std::string extracted_text;  // inner text, tags dropped, entities decoded
};

std::string_view to_string(RegionKind kind);

/// Comments, inline-style hidden elements and <meta content> in HTML or in
/// the HTML islands of Markdown. Code spans and fenced blocks are skipped.
/// Invisible codepoints are dropped before parsing; spans map back to the
/// original text.
std::vector<HiddenRegion> extract_hidden_regions(const ScanTarget& target);

// D1
std::vector<Finding> scan_invisible_unicode(const ScanTarget& target,
                                            const RuleSettings& settings = RuleSettings{});
// D2
std::vector<Finding> detect_hidden_instructions(const ScanTarget& target,
                                                const std::vector<HiddenRegion>& regions,
                                                const Lexicons& lexicons = Lexicons::defaults(),
                                                const RuleSettings& settings = RuleSettings{});
// D3
std::vector<Finding> detect_lookalike_domains(const ScanTarget& target,
                                              const std::vector<std::string>& context_tokens,
                                              const Lexicons& lexicons = Lexicons::defaults(),
                                              const RuleSettings& settings = RuleSettings{});
// D4
std::vector<Finding> detect_config_write_instructions(
    const ScanTarget& target, const Lexicons& lexicons = Lexicons::defaults(),
    const RuleSettings& settings = RuleSettings{});

/// Lowercased lookalike tokens from a name such as "sequential-thinking":
/// its alphanumeric parts and their concatenation, minus short and generic
/// words.
std::vector<std::string> context_tokens_from(std::string_view name);

/// Optimal string alignment distance (adjacent transpositions count 1).
std::size_t damerau_levenshtein(std::string_view a, std::string_view b);

/// Last two labels of `host`, or three under a two-letter country code with
/// a generic second level (example.co.uk). Empty for IP literals.
std::string registrable_domain(std::string_view host);

/// Impact of a document that mentions the given text: the union over
/// sensitive files named in it, or local-only when none is named.
ImpactScope document_impact(std::string_view text, const Lexicons& lexicons);

}  // namespace nestguard::doc

#endif  // NESTGUARD_DOC_DOC_ANALYSIS_HPP
