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

#include "nestguard/doc/doc_analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>

#include "nestguard/core/text.hpp"
#include "nestguard/extract/xml_reader.hpp"
#include "markdown.hpp"

namespace nestguard::doc {
namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// Case-insensitive filename mention bounded by non-name characters.
bool mentions_file(std::string_view lower_text, std::string_view file) {
  auto needle = ascii_lower(file);
  std::size_t pos = 0;
  while ((pos = lower_text.find(needle, pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 || (!is_word_char(lower_text[pos - 1]) && lower_text[pos - 1] != '-');
    auto after = pos + needle.size();
    bool right_ok = after >= lower_text.size() || !is_word_char(lower_text[after]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

bool any_file(std::string_view lower_text, const Lexicons& lex) {
  return std::any_of(lex.sensitive_files.begin(), lex.sensitive_files.end(),
                     [&](const std::string& f) { return mentions_file(lower_text, f); });
}

bool any_word(std::string_view lower_text, const std::vector<std::string>& words) {
  return std::any_of(words.begin(), words.end(), [&](const std::string& w) {
    return contains_word(lower_text, ascii_lower(w));
  });
}

std::string first_word(std::string_view lower_text, const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (contains_word(lower_text, ascii_lower(w))) return w;
  }
  return {};
}

std::string decode_html_entities(std::string_view text) {
  std::string tmp;
  tmp.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.substr(i, 6) == "&nbsp;") {
      tmp.push_back(' ');
      i += 5;
    } else {
      tmp.push_back(text[i]);
    }
  }
  return decode_xml_entities(tmp);
}

// Text content of an HTML fragment: tags and comments dropped.
std::string strip_tags(std::string_view html) {
  std::string out;
  std::size_t i = 0;
  while (i < html.size()) {
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
    } else if (html[i] == '<') {
      auto end = html.find('>', i);
      i = end == std::string_view::npos ? html.size() : end + 1;
      out.push_back(' ');
    } else {
      out.push_back(html[i++]);
    }
  }
  return out;
}

struct Tag {
  std::string name;  // lowercase
  std::vector<std::pair<std::string, std::string>> attributes;
  std::size_t end = 0;  // one past '>'
  bool self_closing = false;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

// Best-effort start tag at `i` ('<' followed by a letter).
Tag parse_tag(std::string_view s, std::size_t i) {
  Tag t;
  std::size_t p = i + 1;
  while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '-' ||
                          s[p] == ':')) {
    t.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[p]))));
    ++p;
  }
  while (p < s.size()) {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    if (p >= s.size()) break;
    if (s[p] == '>') {
      t.end = p + 1;
      return t;
    }
    if (s.substr(p, 2) == "/>") {
      t.self_closing = true;
      t.end = p + 2;
      return t;
    }
    std::string key;
    while (p < s.size() && !std::isspace(static_cast<unsigned char>(s[p])) && s[p] != '=' &&
           s[p] != '>' && s.substr(p, 2) != "/>") {
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[p]))));
      ++p;
    }
    if (key.empty()) {
      ++p;  // stray character
      continue;
    }
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    std::string value;
    if (p < s.size() && s[p] == '=') {
      ++p;
      while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
      if (p < s.size() && (s[p] == '"' || s[p] == '\'')) {
        char q = s[p];
        auto close = s.find(q, p + 1);
        if (close == std::string_view::npos) close = s.size();
        value = decode_html_entities(s.substr(p + 1, close - p - 1));
        p = std::min(close + 1, s.size());
      } else {
        while (p < s.size() && !std::isspace(static_cast<unsigned char>(s[p])) && s[p] != '>') {
          value.push_back(s[p++]);
        }
      }
    }
    t.attributes.emplace_back(std::move(key), std::move(value));
  }
  t.end = s.size();
  return t;
}

bool is_hidden(const Tag& t) {
  if (t.attr("hidden")) return true;
  const std::string* style = t.attr("style");
  if (!style) return false;
  std::string compact;
  for (char c : *style) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  compact = ascii_lower(compact);
  return compact.find("display:none") != std::string::npos ||
         compact.find("visibility:hidden") != std::string::npos;
}

// [content_end, element_end) of the element opened by `t` at `open`.
std::pair<std::size_t, std::size_t> matching_close(std::string_view s, const Tag& t) {
  int depth = 1;
  std::size_t p = t.end;
  while (p < s.size()) {
    auto lt = s.find('<', p);
    if (lt == std::string_view::npos) break;
    if (s.substr(lt, 4) == "<!--") {
      auto end = s.find("-->", lt + 4);
      p = end == std::string_view::npos ? s.size() : end + 3;
      continue;
    }
    bool closing = lt + 1 < s.size() && s[lt + 1] == '/';
    std::size_t n = lt + (closing ? 2 : 1);
    std::size_t e = n;
    while (e < s.size() && (std::isalnum(static_cast<unsigned char>(s[e])) || s[e] == '-')) ++e;
    bool same = iequals(s.substr(n, e - n), t.name);
    auto gt = s.find('>', lt);
    std::size_t after = gt == std::string_view::npos ? s.size() : gt + 1;
    if (same && closing && --depth == 0) return {lt, after};
    if (same && !closing && !(gt != std::string_view::npos && gt > 0 && s[gt - 1] == '/')) {
      ++depth;
    }
    p = after;
  }
  return {s.size(), s.size()};
}

const std::set<std::string>& void_elements() {
  static const std::set<std::string> kVoid = {"area", "base", "br",   "col",   "embed",
                                              "hr",   "img",  "input", "link", "meta",
                                              "source", "track", "wbr"};
  return kVoid;
}

Finding base_finding(const ScanTarget& target, std::string_view rule_id,
                     const RuleSettings& settings, std::string locator_path, SourceSpan span) {
  const Rule* rule = find_rule(rule_id);
  Finding f;
  f.rule_id = std::string(rule_id);
  f.severity = settings.severity(rule_id);
  f.stage = rule ? rule->stage : AttackStage::Stage1aSourceManipulation;
  f.target_path = target.relative_path;
  f.locator = {std::move(locator_path), span};
  f.remediation = rule ? rule->remediation : "";
  f.impact = {true, false};
  return f;
}

std::string codepoint_hex(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

// The line around `offset`, cut to the evidence cap on codepoint boundaries.
std::string evidence_window(std::string_view text, std::size_t offset) {
  std::size_t line_begin = 0;
  if (offset > 0) {
    auto nl = text.rfind('\n', offset - 1);
    if (nl != std::string_view::npos) line_begin = nl + 1;
  }
  auto line_end = text.find('\n', offset);
  if (line_end == std::string_view::npos) line_end = text.size();
  std::size_t b = line_begin;
  if (offset > b + kMaxEvidenceBytes / 2) b = offset - kMaxEvidenceBytes / 2;
  while (b < text.size() && (static_cast<unsigned char>(text[b]) & 0xC0) == 0x80) ++b;
  auto e = std::min(line_end, b + kMaxEvidenceBytes);
  auto window = utf8_prefix(text.substr(b, e - b), kMaxEvidenceBytes);
  return std::string(window);
}

bool is_ip_literal(std::string_view host) {
  return !host.empty() && (host.front() == '[' ||
                           host.find_first_not_of("0123456789.") == std::string_view::npos);
}

struct UrlMatch {
  std::size_t begin;
  std::size_t end;
  std::string host;
};

std::vector<UrlMatch> find_urls(std::string_view text) {
  std::vector<UrlMatch> out;
  std::size_t pos = 0;
  while ((pos = text.find("://", pos)) != std::string_view::npos) {
    std::size_t b = pos;
    while (b > 0 && (std::isalnum(static_cast<unsigned char>(text[b - 1])) || text[b - 1] == '+' ||
                     text[b - 1] == '-' || text[b - 1] == '.')) {
      --b;
    }
    bool scheme_ok = b < pos && std::isalpha(static_cast<unsigned char>(text[b]));
    std::size_t h = pos + 3;
    std::size_t e = h;
    static constexpr std::string_view kStop = " \t\r\n\"'<>()[]{}`|\\^";
    while (e < text.size() && kStop.find(text[e]) == std::string_view::npos &&
           static_cast<unsigned char>(text[e]) >= 0x21) {
      ++e;
    }
    // Trailing sentence punctuation is not part of the URL.
    while (e > h && std::string_view(".,;:!?").find(text[e - 1]) != std::string_view::npos) --e;
    if (scheme_ok && e > h) {
      auto authority = text.substr(h, e - h);
      auto slash = authority.find_first_of("/?#");
      authority = authority.substr(0, slash);
      auto at = authority.rfind('@');
      if (at != std::string_view::npos) authority = authority.substr(at + 1);
      auto colon = authority.rfind(':');
      if (colon != std::string_view::npos && authority.front() != '[') {
        authority = authority.substr(0, colon);
      }
      while (!authority.empty() && authority.back() == '.') authority.remove_suffix(1);
      if (!authority.empty()) out.push_back({b, e, ascii_lower(authority)});
    }
    pos = std::max(e, pos + 3);
  }
  return out;
}

bool allowlisted(std::string_view host, std::string_view registrable, const Lexicons& lex) {
  for (const auto& a : lex.domain_allowlist) {
    auto allowed = ascii_lower(a);
    if (registrable == allowed || host == allowed) return true;
    if (host.size() > allowed.size() && host.ends_with(allowed) &&
        host[host.size() - allowed.size() - 1] == '.') {
      return true;
    }
  }
  return false;
}

bool suspicious_code(std::string_view content, const Lexicons& lex) {
  for (std::string_view op : {"&&", "||", "|", ";", "$(", "`"}) {
    if (content.find(op) != std::string_view::npos) return true;
  }
  return any_word(ascii_lower(content), lex.fetch_words);
}

}  // namespace

Lexicons Lexicons::defaults() {
  Lexicons l;
  l.imperatives = {"run", "execute", "add", "edit", "write", "insert", "append",
                   "ignore previous", "you must"};
  l.command_words = {"bash", "sh", "curl", "wget", "node", "python"};
  l.fetch_words = {"curl", "wget", "fetch", "Invoke-WebRequest", "iwr"};
  l.sensitive_files = {"mcp.json",          ".mcp.json",       "tasks.json",
                       "launch.json",       "settings.json",   "devcontainer.json",
                       ".devcontainer.json", ".github/workflows", "Makefile",
                       "GNUmakefile",       "pyproject.toml",  "pom.xml",
                       "build.gradle",      "build.gradle.kts", ".bashrc",
                       ".zshrc",            ".profile",        ".bash_profile"};
  l.domain_allowlist = {"github.com", "gitlab.com", "npmjs.com",
                        "pypi.org",   "crates.io",  "maven.apache.org"};
  return l;
}

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::HtmlComment: return "html comment";
    case RegionKind::NonRenderedElement: return "hidden element";
    case RegionKind::Metadata: return "meta content";
  }
  return "";
}

std::vector<CodepointReport> invisible_codepoints(const ScanTarget& target) {
  constexpr std::array kOrder = {InvisibleClass::ZeroWidth, InvisibleClass::BidiControl,
                                 InvisibleClass::TagBlock};
  std::array<CodepointReport, 3> acc{};
  const std::string& text = target.text;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    char32_t cp = next_codepoint(text, pos);
    auto cls = classify_invisible(cp, start == 0);
    if (!cls) continue;
    auto& r = acc[static_cast<std::size_t>(*cls)];
    if (r.count++ == 0) {
      r.codepoint = cp;
      r.cls = *cls;
      r.first_span = target.lines.span(start, pos);
    }
  }
  std::vector<CodepointReport> out;
  for (auto cls : kOrder) {
    if (acc[static_cast<std::size_t>(cls)].count > 0) out.push_back(acc[static_cast<std::size_t>(cls)]);
  }
  if (target.invalid_sequences > 0) {
    CodepointReport r;
    r.codepoint = 0xFFFD;
    r.cls = InvisibleClass::InvalidSequence;
    r.count = target.invalid_sequences;
    auto off = target.first_invalid_offset.value_or(0);
    r.first_span = target.lines.span(off, std::min(off + 3, text.size()));
    out.push_back(r);
  }
  return out;
}

std::vector<HiddenRegion> extract_hidden_regions(const ScanTarget& target) {
  std::vector<HiddenRegion> out;
  // Parsed without invisible codepoints so they cannot break up markup.
  auto stripped = strip_invisible_mapped(target.text);
  std::string_view s = stripped.text;
  std::vector<std::pair<std::size_t, std::size_t>> masked;
  if (target.format == ConfigFormat::MarkdownDoc) masked = code_ranges(s);
  auto mask_end = [&](std::size_t i) -> std::size_t {
    for (auto [b, e] : masked) {
      if (i >= b && i < e) return e;
    }
    return 0;
  };
  auto add = [&](RegionKind kind, std::size_t b, std::size_t e, std::string text) {
    out.push_back({kind, target.lines.span(stripped.to_source(b), stripped.to_source_end(e)),
                   std::move(text)});
  };

  std::size_t i = 0;
  while ((i = s.find('<', i)) != std::string_view::npos) {
    if (auto e = mask_end(i)) {
      i = e;
      continue;
    }
    if (s.substr(i, 4) == "<!--") {
      auto close = s.find("-->", i + 4);
      auto inner_end = close == std::string_view::npos ? s.size() : close;
      auto end = close == std::string_view::npos ? s.size() : close + 3;
      add(RegionKind::HtmlComment, i, end,
          decode_html_entities(s.substr(i + 4, inner_end - i - 4)));
      i = end;
      continue;
    }
    if (i + 1 >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i + 1]))) {
      ++i;
      continue;
    }
    Tag tag = parse_tag(s, i);
    if (tag.name == "meta") {
      if (const std::string* content = tag.attr("content")) {
        add(RegionKind::Metadata, i, tag.end, *content);
      }
      i = tag.end;
      continue;
    }
    if (is_hidden(tag) && !tag.self_closing && !void_elements().count(tag.name)) {
      auto [content_end, element_end] = matching_close(s, tag);
      auto inner = s.substr(tag.end, content_end - tag.end);
      add(RegionKind::NonRenderedElement, i, element_end,
          decode_html_entities(collapse_whitespace(strip_tags(inner))));
      // Comments nested inside are regions of their own.
      std::size_t c = tag.end;
      while ((c = s.find("<!--", c)) != std::string_view::npos && c < content_end) {
        auto close = s.find("-->", c + 4);
        auto inner_end = close == std::string_view::npos ? s.size() : close;
        auto end = close == std::string_view::npos ? s.size() : close + 3;
        add(RegionKind::HtmlComment, c, end,
            decode_html_entities(s.substr(c + 4, inner_end - c - 4)));
        c = end;
      }
      i = element_end;
      continue;
    }
    i = std::max(tag.end, i + 1);
  }
  return out;
}

std::vector<Finding> scan_invisible_unicode(const ScanTarget& target,
                                            const RuleSettings& settings) {
  std::vector<Finding> out;
  if (!settings.enabled(rule_ids::kInvisibleUnicode)) return out;
  for (const auto& r : invisible_codepoints(target)) {
    auto hex = codepoint_hex(r.codepoint);
    Finding f = base_finding(target, rule_ids::kInvisibleUnicode, settings,
                             hex + " (" + std::string(to_string(r.cls)) + ")", r.first_span);
    auto window = evidence_window(target.text, r.first_span.begin);
    f.evidence = window;
    f.message = std::to_string(r.count) + " " + std::string(to_string(r.cls)) +
                " codepoint(s); first " + hex + " at line " + std::to_string(r.first_span.line) +
                ", column " + std::to_string(r.first_span.column);
    if (r.cls == InvisibleClass::InvalidSequence) {
      f.message = std::to_string(r.count) + " invalid UTF-8 sequence(s) replaced by U+FFFD; first at line " +
                  std::to_string(r.first_span.line);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> detect_hidden_instructions(const ScanTarget& target,
                                                const std::vector<HiddenRegion>& regions,
                                                const Lexicons& lexicons,
                                                const RuleSettings& settings) {
  std::vector<Finding> out;
  if (!settings.enabled(rule_ids::kHiddenInstruction)) return out;
  for (const auto& region : regions) {
    auto text = collapse_whitespace(strip_invisible(region.extracted_text));
    auto lower = ascii_lower(text);
    auto imperative = first_word(lower, lexicons.imperatives);
    if (imperative.empty()) continue;
    auto command = first_word(lower, lexicons.command_words);
    bool file = any_file(lower, lexicons);
    if (command.empty() && !file) continue;
    Finding f = base_finding(target, rule_ids::kHiddenInstruction, settings,
                             std::string(to_string(region.kind)), region.span);
    f.evidence = literal_evidence(target.text, trim(region.extracted_text), region.span.begin,
                                  region.span, f.evidence_truncated);
    f.message = std::string(to_string(region.kind)) + " hides an instruction (\"" + imperative +
                "\"" + (command.empty() ? "" : " with command word \"" + command + "\"") +
                (file ? " naming an executable config file" : "") + ")";
    f.impact = document_impact(lower, lexicons);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> detect_lookalike_domains(const ScanTarget& target,
                                              const std::vector<std::string>& context_tokens,
                                              const Lexicons& lexicons,
                                              const RuleSettings& settings) {
  std::vector<Finding> out;
  if (!settings.enabled(rule_ids::kLookalikeDomain) || context_tokens.empty()) return out;
  auto stripped = strip_invisible_mapped(target.text);
  std::set<std::string> reported;
  for (const auto& url : find_urls(stripped.text)) {
    if (is_ip_literal(url.host)) continue;
    auto registrable = registrable_domain(url.host);
    if (registrable.empty() || allowlisted(url.host, registrable, lexicons)) continue;
    if (reported.count(registrable)) continue;
    auto label = registrable.substr(0, registrable.find('.'));
    std::string matched;
    std::string how;
    for (const auto& token : context_tokens) {
      if (token.size() < 4) continue;
      if (label.find(token) != std::string::npos) {
        matched = token;
        how = "contains";
        break;
      }
      if (auto d = damerau_levenshtein(token, label); d <= 2) {
        matched = token;
        how = "is " + std::to_string(d) + " edit(s) from";
        break;
      }
    }
    if (matched.empty()) continue;
    reported.insert(registrable);
    auto b = stripped.to_source(url.begin);
    auto e = stripped.to_source_end(url.end);
    Finding f = base_finding(target, rule_ids::kLookalikeDomain, settings, "url " + url.host,
                             target.lines.span(b, e));
    f.evidence = std::string(utf8_prefix(std::string_view(target.text).substr(b, e - b),
                                         kMaxEvidenceBytes));
    f.evidence_truncated = e - b > f.evidence.size();
    f.message = "domain " + registrable + " " + how + " project name '" + matched + "'";
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> detect_config_write_instructions(const ScanTarget& target,
                                                      const Lexicons& lexicons,
                                                      const RuleSettings& settings) {
  std::vector<Finding> out;
  if (!settings.enabled(rule_ids::kConfigWriteInstruction)) return out;
  auto stripped = strip_invisible_mapped(target.text);
  const std::string& text = stripped.text;
  auto lines = split_lines(text);
  auto code = markdown_code(text);

  std::vector<bool> in_fence(lines.size(), false);
  std::vector<bool> code_hit(lines.size(), false);
  for (const auto& block : code.fences) {
    for (std::size_t l = block.open_line + 1; l < block.close_line && l < lines.size(); ++l) {
      in_fence[l] = true;
    }
    if (block.close_line < lines.size()) in_fence[block.close_line] = true;
    if (suspicious_code(block.content, lexicons)) code_hit[block.open_line] = true;
  }
  for (const auto& span : code.inline_spans) {
    if (span.line < lines.size() && suspicious_code(span.content, lexicons)) {
      code_hit[span.line] = true;
    }
  }
  std::vector<bool> has_file(lines.size(), false);
  std::vector<bool> has_imperative(lines.size(), false);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (in_fence[l]) continue;
    auto lower = ascii_lower(lines[l].text);
    has_file[l] = any_file(lower, lexicons);
    has_imperative[l] = any_word(lower, lexicons.imperatives);
  }

  std::set<std::size_t> reported_windows;
  for (std::size_t c = 0; c < lines.size(); ++c) {
    if (!code_hit[c]) continue;
    for (std::size_t s = c >= 2 ? c - 2 : 0; s <= c; ++s) {
      std::size_t last = std::min(s + 2, lines.size() - 1);
      bool file = false;
      bool imperative = false;
      for (std::size_t l = s; l <= last; ++l) {
        file = file || has_file[l];
        imperative = imperative || has_imperative[l];
      }
      if (!file || !imperative) continue;
      if (!reported_windows.insert(s).second) break;
      auto b = stripped.to_source(lines[s].offset);
      auto e = stripped.to_source_end(lines[last].offset + lines[last].text.size());
      std::string_view window = std::string_view(target.text).substr(b, e - b);
      while (!window.empty() && (window.back() == '\r' || window.back() == '\n')) window.remove_suffix(1);
      Finding f = base_finding(target, rule_ids::kConfigWriteInstruction, settings,
                               "lines " + std::to_string(s + 1) + "-" + std::to_string(last + 1),
                               target.lines.span(b, b + window.size()));
      auto cut = utf8_prefix(window, kMaxEvidenceBytes);
      f.evidence = std::string(cut);
      f.evidence_truncated = cut.size() < window.size();
      auto lower = ascii_lower(text.substr(lines[s].offset,
                                           lines[last].offset + lines[last].text.size() -
                                               lines[s].offset));
      std::string file_name;
      for (const auto& sf : lexicons.sensitive_files) {
        if (mentions_file(lower, sf)) {
          file_name = sf;
          break;
        }
      }
      f.message = "instructions to change " + file_name +
                  " next to a code sample that chains or downloads commands";
      f.impact = document_impact(lower, lexicons);
      out.push_back(std::move(f));
      break;
    }
  }
  return out;
}

std::vector<std::string> context_tokens_from(std::string_view name) {
  static const std::set<std::string> kStop = {"server", "servers", "mcp",  "main",   "app",
                                              "test",   "tests",   "project", "src", "tool",
                                              "tools",  "node",    "python", "config", "data"};
  std::vector<std::string> parts;
  std::string cur;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      parts.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  std::vector<std::string> out;
  auto keep = [&](const std::string& t) {
    if (t.size() < 4 || kStop.count(t)) return;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  for (const auto& p : parts) keep(p);
  if (parts.size() > 1) {
    std::string joined;
    for (const auto& p : parts) joined += p;
    keep(joined);
  }
  return out;
}

std::size_t damerau_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

std::string registrable_domain(std::string_view host) {
  std::string h = ascii_lower(host);
  while (!h.empty() && h.back() == '.') h.pop_back();
  if (h.empty() || is_ip_literal(h)) return {};
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (true) {
    auto dot = h.find('.', start);
    labels.push_back(h.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (labels.size() < 2) return h;
  static const std::set<std::string> kGenericSecond = {"co", "com", "net", "org",
                                                       "gov", "edu", "ac", "ne", "or"};
  std::size_t keep = 2;
  if (labels.size() >= 3 && labels.back().size() == 2 &&
      kGenericSecond.count(labels[labels.size() - 2])) {
    keep = 3;
  }
  std::string out;
  for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out += labels[i];
  }
  return out;
}

ImpactScope document_impact(std::string_view text, const Lexicons& lexicons) {
  auto lower = ascii_lower(text);
  ImpactScope scope;
  bool any = false;
  for (const auto& f : lexicons.sensitive_files) {
    if (!mentions_file(lower, f)) continue;
    ConfigFormat fmt = f == ".github/workflows" ? ConfigFormat::GithubWorkflow : match_profile(f);
    if (fmt == ConfigFormat::Unknown || is_document_format(fmt)) continue;
    auto impact = classify_impact(fmt);
    scope.pc = scope.pc || impact.pc;
    scope.oss = scope.oss || impact.oss;
    any = true;
  }
  if (!any) return {true, false};
  return scope;
}

}  // namespace nestguard::doc
