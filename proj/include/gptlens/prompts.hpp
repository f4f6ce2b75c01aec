#pragma once

#include "gptlens/core.hpp"
#include "gptlens/prompt_assets.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gptlens {

enum class TemplateId { auditor, critic, binary, multiclass, open_ended };

struct PromptTemplate {
  TemplateId template_id;
  std::string body;
  std::set<std::string> required_placeholders;
};

inline PromptTemplate get_template(TemplateId id) {
  switch (id) {
    case TemplateId::auditor:
      return {id, assets::kAuditorTemplate, {"m", "contract_code", "json_format"}};
    case TemplateId::critic:
      return {id, assets::kCriticTemplate, {"auditor_output", "json_format"}};
    case TemplateId::binary:
      return {id, assets::kBinaryTemplate, {"vul_type", "contract_code"}};
    case TemplateId::multiclass:
      return {id,
              assets::kMulticlassTemplate,
              {"n", "vul_types", "indicator_example", "contract_code"}};
    case TemplateId::open_ended:
      return {id, assets::kOpenEndedTemplate, {"contract_code"}};
  }
  throw ConfigError("unknown template id");
}

/// Single-pass placeholder substitution. Placeholders are located in the
/// template only, never in substituted values, so contract code containing
/// braces passes through verbatim.
inline std::string render_template(const std::string& body,
                                   const std::map<std::string, std::string>& values,
                                   const std::set<std::string>& required) {
  for (const auto& name : required) {
    if (!values.count(name))
      throw ConfigError("missing placeholder value: " + name);
    if (body.find("{" + name + "}") == std::string::npos)
      throw ConfigError("template lacks required placeholder: " + name);
  }
  for (const auto& [name, _] : values) {
    if (!required.count(name))
      throw ConfigError("unexpected placeholder value: " + name);
  }

  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t open = body.find('{', pos);
    if (open == std::string::npos) {
      out.append(body, pos, std::string::npos);
      break;
    }
    const std::size_t close = body.find('}', open + 1);
    std::string name =
        close == std::string::npos ? "" : body.substr(open + 1, close - open - 1);
    auto it = values.find(name);
    if (close != std::string::npos && it != values.end()) {
      out.append(body, pos, open - pos);
      out.append(it->second);
      pos = close + 1;
    } else {
      out.append(body, pos, open + 1 - pos);
      pos = open + 1;
    }
  }
  return out;
}

inline std::string render_with(TemplateId id,
                               const std::map<std::string, std::string>& values) {
  const PromptTemplate t = get_template(id);
  return render_template(t.body, values, t.required_placeholders);
}

// ---------------------------------------------------------------------------
// Function snippet extraction
//
// Lightweight textual scan: match `function <name>` then balance braces.
// Snippets are advisory context for the critic, so a real parser is not
// needed; discrimination only assesses recognized vulnerabilities at the
// function level.
// ---------------------------------------------------------------------------

inline constexpr const char* kSnippetNotFound = "(function not located in source)";

inline bool is_identifier_char(char ch) {
  const auto c = static_cast<unsigned char>(ch);
  return std::isalnum(c) || c == '_' || c == '$';
}

inline std::string extract_function_snippet(const std::string& source,
                                            const std::string& function_name) {
  if (function_name.empty()) return kSnippetNotFound;
  const std::string keyword = "function";
  std::size_t pos = 0;
  while ((pos = source.find(keyword, pos)) != std::string::npos) {
    const std::size_t after = pos + keyword.size();
    if (pos > 0 && is_identifier_char(source[pos - 1])) {
      pos = after;
      continue;
    }
    std::size_t name_start = after;
    while (name_start < source.size() &&
           std::isspace(static_cast<unsigned char>(source[name_start])))
      ++name_start;
    if (source.compare(name_start, function_name.size(), function_name) == 0) {
      const std::size_t name_end = name_start + function_name.size();
      if (name_end >= source.size() || !is_identifier_char(source[name_end])) {
        const std::size_t body_open = source.find('{', name_end);
        if (body_open == std::string::npos) break;
        int depth = 0;
        for (std::size_t i = body_open; i < source.size(); ++i) {
          if (source[i] == '{') ++depth;
          if (source[i] == '}') {
            --depth;
            if (depth == 0) return source.substr(pos, i - pos + 1);
          }
        }
        break;  // unbalanced braces
      }
    }
    pos = after;
  }
  return kSnippetNotFound;
}

// ---------------------------------------------------------------------------
// Renderers — pure functions; same inputs yield byte-identical output.
// ---------------------------------------------------------------------------

inline std::string render_auditor(const std::string& contract_source, int m) {
  if (contract_source.empty()) throw ConfigError("contract source must be non-empty");
  if (m < 1) throw ConfigError("m must be >= 1");
  return render_with(TemplateId::auditor, {{"m", std::to_string(m)},
                                           {"contract_code", contract_source},
                                           {"json_format", assets::kAuditorJsonFormat}});
}

/// Renders the critic prompt over a batch of findings. function_snippets maps
/// function_name -> source excerpt; findings whose function is absent render
/// the literal not-located marker.
inline std::string render_critic(
    const std::vector<Finding>& findings,
    const std::map<std::string, std::string>& function_snippets) {
  if (findings.empty()) throw ConfigError("critic prompt requires at least one finding");

  std::string blocks;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const Finding& f = findings[i];
    auto snippet_it = function_snippets.find(f.function_name);
    const std::string snippet = snippet_it != function_snippets.end()
                                    ? snippet_it->second
                                    : std::string(kSnippetNotFound);
    if (!blocks.empty()) blocks += "\n\n";
    blocks += render_template(assets::kCriticFindingTemplate,
                              {{"index", std::to_string(i + 1)},
                               {"function_name", f.function_name},
                               {"vulnerability", f.vulnerability},
                               {"reasoning", f.reasoning},
                               {"function_code", snippet}},
                              {"index", "function_name", "vulnerability", "reasoning",
                               "function_code"});
  }
  return render_with(TemplateId::critic, {{"auditor_output", blocks},
                                          {"json_format", assets::kCriticJsonFormat}});
}

/// Convenience overload: snippets are pulled out of the contract source.
inline std::string render_critic_for_case(const std::vector<Finding>& findings,
                                          const std::string& contract_source) {
  std::map<std::string, std::string> snippets;
  for (const auto& f : findings) {
    if (snippets.count(f.function_name)) continue;
    const std::string snippet = extract_function_snippet(contract_source, f.function_name);
    if (snippet != kSnippetNotFound) snippets[f.function_name] = snippet;
  }
  return render_critic(findings, snippets);
}

inline std::string render_binary(const std::string& contract_source,
                                 const std::string& vul_type) {
  if (contract_source.empty()) throw ConfigError("contract source must be non-empty");
  if (vul_type.empty()) throw ConfigError("vul_type must be non-empty");
  return render_with(TemplateId::binary,
                     {{"vul_type", vul_type}, {"contract_code", contract_source}});
}

inline std::string render_multiclass(const std::string& contract_source,
                                     const std::vector<std::string>& vul_types) {
  if (contract_source.empty()) throw ConfigError("contract source must be non-empty");
  if (vul_types.empty()) throw ConfigError("vul_types must be non-empty");
  std::set<std::string> distinct(vul_types.begin(), vul_types.end());
  if (distinct.size() != vul_types.size())
    throw ConfigError("vul_types must be distinct");

  std::string listed;
  std::string example;
  for (std::size_t i = 0; i < vul_types.size(); ++i) {
    if (i > 0) {
      listed += ", ";
      example += ", ";
    }
    listed += vul_types[i];
    example += vul_types[i] + ": " + (i == 1 ? "1" : "0");
  }
  return render_with(TemplateId::multiclass,
                     {{"n", std::to_string(vul_types.size())},
                      {"vul_types", listed},
                      {"indicator_example", "{" + example + "}"},
                      {"contract_code", contract_source}});
}

inline std::string render_open_ended(const std::string& contract_source) {
  if (contract_source.empty()) throw ConfigError("contract source must be non-empty");
  return render_with(TemplateId::open_ended, {{"contract_code", contract_source}});
}

}  // namespace gptlens
