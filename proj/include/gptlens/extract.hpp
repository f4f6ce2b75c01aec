#pragma once

#include "gptlens/core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gptlens {

// ---------------------------------------------------------------------------
// Tolerant extraction of auditor/critic records from raw model text.
//
// The format stanza in the prompt is advisory, not enforced, so real output
// arrives fenced, prefixed with prose, with trailing commas, with missing
// commas between records, or with scores as floats or strings. Extraction is
// total: it never throws on arbitrary input and always returns a report. The
// repair pipeline order is fixed: trim -> strip code fences -> locate
// balanced bracket spans -> parse -> per-field coercion.
//
// Everything that is not turned into a value lands in `residue` (structural
// separators and whitespace excepted), so nothing is silently discarded.
// ---------------------------------------------------------------------------

namespace repair {
inline constexpr const char* kFenceStrip = "fence-strip";
inline constexpr const char* kBracketScan = "bracket-scan";
inline constexpr const char* kTrailingTextDrop = "trailing-text-drop";
inline constexpr const char* kScoreClamp = "score-clamp";
inline constexpr const char* kScoreMissing = "score-missing";
inline constexpr const char* kTruncated = "truncated";
inline constexpr const char* kRecordDrop = "record-drop";
inline constexpr const char* kNameMismatch = "name-mismatch";
}  // namespace repair

template <typename T>
struct ExtractionReport {
  std::vector<T> values;
  std::vector<std::string> repairs_applied;  // unique, in first-applied order
  std::string residue;
  bool extraction_failed = false;

  bool has_repair(std::string_view tag) const {
    for (const auto& r : repairs_applied)
      if (r == tag) return true;
    return false;
  }
  bool clean() const { return !extraction_failed && repairs_applied.empty(); }
};

namespace detail {

inline std::string_view trim_view(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool has_word_char(std::string_view s) {
  for (unsigned char c : s)
    if (std::isalnum(c)) return true;
  return false;
}

template <typename T>
void add_tag(ExtractionReport<T>& report, const char* tag) {
  if (!report.has_repair(tag)) report.repairs_applied.emplace_back(tag);
}

template <typename T>
void add_residue(ExtractionReport<T>& report, std::string_view text) {
  if (!has_word_char(text)) return;
  if (!report.residue.empty()) report.residue += "\n";
  report.residue.append(trim_view(text));
}

/// Pulls the contents of fenced code blocks out of `text`. Returns true when
/// at least one fence line was seen; `inside` collects fenced content and
/// `outside` the rest.
inline bool split_code_fences(std::string_view text, std::string& inside,
                              std::string& outside) {
  bool any_fence = false;
  bool in_fence = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (trim_view(line).substr(0, 3) == "```") {
      any_fence = true;
      in_fence = !in_fence;
    } else if (in_fence) {
      inside.append(line);
      inside.push_back('\n');
    } else {
      outside.append(line);
      outside.push_back('\n');
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return any_fence;
}

/// Whole-output "null" (optionally quoted or backticked, any case).
inline bool is_null_token(std::string_view s) {
  s = trim_view(s);
  while (!s.empty() && (s.front() == '"' || s.front() == '\'' || s.front() == '`'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == '"' || s.back() == '\'' || s.back() == '`' ||
                        s.back() == '.'))
    s.remove_suffix(1);
  if (s.size() != 4) return false;
  const char* null_text = "null";
  for (std::size_t i = 0; i < 4; ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != null_text[i]) return false;
  return true;
}

/// Removes commas that directly precede a closing brace or bracket.
inline std::string strip_trailing_commas(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      out.push_back(c);
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && (s[j] == '}' || s[j] == ']')) continue;  // drop comma
    }
    out.push_back(c);
  }
  return out;
}

struct Span {
  std::size_t begin;
  std::size_t end;  // one past last char
};

/// Locates top-level balanced {...} spans, string- and escape-aware.
inline std::vector<Span> scan_object_spans(std::string_view text) {
  std::vector<Span> spans;
  bool in_string = false;
  bool escaped = false;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') {
      if (depth > 0) in_string = true;
      continue;
    }
    if (c == '{') {
      if (depth == 0) start = i;
      ++depth;
    } else if (c == '}') {
      if (depth > 0) {
        --depth;
        if (depth == 0) spans.push_back({start, i + 1});
      }
    }
  }
  return spans;
}

inline json parse_lenient(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) doc = json::parse(strip_trailing_commas(text), nullptr, false);
  return doc;
}

/// Shared front half of the pipeline: trim, fence-strip, null check, then
/// either a whole-document parse or a bracket scan. Returns candidate record
/// objects; `is_null` signals the literal null output.
template <typename T>
std::vector<json> gather_records(const std::string& raw, ExtractionReport<T>& report,
                                 bool& is_null) {
  is_null = false;
  std::string working{trim_view(raw)};

  if (working.find("```") != std::string::npos) {
    std::string inside;
    std::string outside;
    split_code_fences(working, inside, outside);
    add_tag(report, repair::kFenceStrip);
    if (has_word_char(outside)) {
      add_tag(report, repair::kTrailingTextDrop);
      add_residue(report, outside);
    }
    working = std::string{trim_view(inside)};
  }

  if (is_null_token(working)) {
    is_null = true;
    return {};
  }

  std::vector<json> records;
  auto push_candidate = [&](const json& node) {
    if (node.is_object()) {
      records.push_back(node);
    } else if (has_word_char(node.dump())) {
      add_tag(report, repair::kRecordDrop);
      add_residue(report, node.dump());
    }
  };

  json whole = parse_lenient(working);
  if (!whole.is_discarded()) {
    if (whole.is_null()) {
      is_null = true;
      return {};
    }
    if (whole.is_array()) {
      for (const auto& item : whole) push_candidate(item);
      return records;
    }
    if (whole.is_object()) {
      records.push_back(whole);
      return records;
    }
    // scalar document: fall through to the bracket scan
  }

  const std::vector<Span> spans = scan_object_spans(working);
  if (!spans.empty()) add_tag(report, repair::kBracketScan);
  std::size_t cursor = 0;
  for (const Span& span : spans) {
    const std::string_view gap{working.data() + cursor, span.begin - cursor};
    if (has_word_char(gap)) {
      add_tag(report, repair::kTrailingTextDrop);
      add_residue(report, gap);
    }
    const std::string_view body{working.data() + span.begin, span.end - span.begin};
    json node = parse_lenient(body);
    if (node.is_discarded()) {
      add_tag(report, repair::kRecordDrop);
      add_residue(report, body);
    } else {
      push_candidate(node);
    }
    cursor = span.end;
  }
  const std::string_view tail{working.data() + cursor, working.size() - cursor};
  if (has_word_char(tail)) {
    add_tag(report, repair::kTrailingTextDrop);
    add_residue(report, tail);
  }
  return records;
}

inline std::string field_as_text(const json& node,
                                 std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto it = node.find(key);
    if (it == node.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    return it->dump();
  }
  return "";
}

/// Coerces one score field: integral in range is clean; anything else is
/// rounded/clamped (score-clamp) or defaulted to zero (score-missing).
template <typename T>
int coerce_score(const json& node, const char* key, ExtractionReport<T>& report) {
  auto it = node.find(key);
  if (it == node.end() || it->is_null()) {
    add_tag(report, repair::kScoreMissing);
    return 0;
  }
  if (it->is_number_integer() || it->is_number_unsigned()) {
    const long long v = it->get<long long>();
    const int clamped = clamp_score(v);
    if (static_cast<long long>(clamped) != v) add_tag(report, repair::kScoreClamp);
    return clamped;
  }
  if (it->is_number_float()) {
    add_tag(report, repair::kScoreClamp);
    return clamp_score(it->get<double>());
  }
  if (it->is_string()) {
    try {
      const double v = std::stod(it->get<std::string>());
      add_tag(report, repair::kScoreClamp);
      return clamp_score(v);
    } catch (...) {
      add_tag(report, repair::kScoreMissing);
      return 0;
    }
  }
  add_tag(report, repair::kScoreMissing);
  return 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// extract_findings
// ---------------------------------------------------------------------------

inline ExtractionReport<Finding> extract_findings(const std::string& raw,
                                                  int auditor_index, int trial_index,
                                                  int m) {
  ExtractionReport<Finding> report;
  bool is_null = false;
  const std::vector<json> records = detail::gather_records(raw, report, is_null);
  if (is_null) return report;

  for (const json& node : records) {
    Finding f;
    f.function_name =
        std::string(detail::trim_view(detail::field_as_text(node, {"function_name", "function"})));
    f.vulnerability = std::string(detail::trim_view(
        detail::field_as_text(node, {"vulnerability", "vulnerability_name", "vulnerability_type"})));
    f.reasoning = detail::field_as_text(node, {"reasoning", "auditor", "description"});
    f.auditor_index = auditor_index;
    f.trial_index = trial_index;
    if (f.function_name.empty() || f.vulnerability.empty()) {
      detail::add_tag(report, repair::kRecordDrop);
      detail::add_residue(report, node.dump());
      continue;
    }
    if (static_cast<int>(report.values.size()) >= m) {
      detail::add_tag(report, repair::kTruncated);
      detail::add_residue(report, node.dump());
      continue;
    }
    report.values.push_back(std::move(f));
  }

  if (report.values.empty() && records.empty()) {
    report.extraction_failed = true;
    report.residue = std::string(detail::trim_view(raw));
    report.repairs_applied.clear();
  }
  return report;
}

// ---------------------------------------------------------------------------
// extract_critiques
//
// Critiques bind to findings positionally: the critic prompt presents the
// batch in order and the reply is expected as parallel records. Slots with no
// record get an all-zero sentinel (zero scores sink in the ranking). When
// `expected_function_names` is given, a per-slot function_name cross-check
// downgrades to a name-mismatch warning tag instead of rejecting.
// ---------------------------------------------------------------------------

inline ExtractionReport<Critique> extract_critiques(
    const std::string& raw, int expected_count,
    const std::vector<std::string>* expected_function_names = nullptr) {
  ExtractionReport<Critique> report;
  if (expected_count < 1) {
    report.extraction_failed = true;
    report.residue = "expected_count must be >= 1";
    return report;
  }
  bool is_null = false;
  const std::vector<json> records = detail::gather_records(raw, report, is_null);

  for (const json& node : records) {
    if (static_cast<int>(report.values.size()) >= expected_count) {
      detail::add_tag(report, repair::kTruncated);
      detail::add_residue(report, node.dump());
      continue;
    }
    Critique c;
    c.criticism = detail::field_as_text(node, {"criticism", "critic", "comment"});
    c.correctness = detail::coerce_score(node, "correctness", report);
    c.severity = detail::coerce_score(node, "severity", report);
    c.profitability = detail::coerce_score(node, "profitability", report);
    if (expected_function_names) {
      const std::size_t slot = report.values.size();
      const std::string name =
          std::string(detail::trim_view(detail::field_as_text(node, {"function_name", "function"})));
      if (!name.empty() && slot < expected_function_names->size() &&
          normalize_name(name) != normalize_name((*expected_function_names)[slot]))
        detail::add_tag(report, repair::kNameMismatch);
    }
    report.values.push_back(std::move(c));
  }

  if (records.empty() && !is_null) {
    report.extraction_failed = true;
    report.residue = std::string(detail::trim_view(raw));
    report.repairs_applied.clear();
  }
  while (static_cast<int>(report.values.size()) < expected_count) {
    detail::add_tag(report, repair::kScoreMissing);
    report.values.push_back(Critique{});
  }
  return report;
}

}  // namespace gptlens
