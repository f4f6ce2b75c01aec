#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gptlens {

using json = nlohmann::json;

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Invalid configuration, flags, or input files that describe a run.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problems loading a dataset (manifest or contract sources).
class DatasetError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// String normalization
//
// Open-ended prompting yields free-form vulnerability names ("Unexpected
// Behaviour" vs "constructor typo"), so all name comparisons go through one
// normalization: lowercase, trim, strip punctuation, collapse whitespace.
// ---------------------------------------------------------------------------

inline std::string normalize_name(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c)) {
      pending_space = true;
    }
    // punctuation is dropped without forcing a word break: "re-entrancy"
    // and "reentrancy" normalize identically
  }
  return out;
}

// ---------------------------------------------------------------------------
// Critic score scale
//
// Integer 0-9. Out-of-range or fractional parsed values are clamped/rounded
// rather than rejected so noisy model output degrades instead of aborting.
// ---------------------------------------------------------------------------

inline constexpr int kScoreMin = 0;
inline constexpr int kScoreMax = 9;

inline int clamp_score(long long value) {
  if (value < kScoreMin) return kScoreMin;
  if (value > kScoreMax) return kScoreMax;
  return static_cast<int>(value);
}

inline int clamp_score(double value) {
  if (std::isnan(value)) return kScoreMin;
  return clamp_score(static_cast<long long>(std::llround(
      std::clamp(value, -1.0e18, 1.0e18))));
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Ground-truth label for one contract: the vulnerable function plus the set
/// of acceptable names for its vulnerability.
struct GroundTruthLabel {
  std::string function_name;
  std::vector<std::string> vulnerability_aliases;  // stored normalized
  std::string description;

  bool operator==(const GroundTruthLabel&) const = default;
};

/// One smart contract under audit. The source is opaque text to the system.
struct ContractCase {
  std::string case_id;
  std::string source;
  std::optional<GroundTruthLabel> label;

  bool operator==(const ContractCase&) const = default;
};

/// One auditor-produced vulnerability candidate.
struct Finding {
  std::string function_name;
  std::string vulnerability;
  std::string reasoning;
  int auditor_index = 0;
  int trial_index = 0;

  bool operator==(const Finding&) const = default;
};

/// Critic output for one finding.
struct Critique {
  std::string criticism;
  int correctness = 0;
  int severity = 0;
  int profitability = 0;

  bool operator==(const Critique&) const = default;
};

/// Weights for combining the critic's three scores into one composite.
struct ScoreWeights {
  double correctness = 1.0 / 3.0;
  double severity = 1.0 / 3.0;
  double profitability = 1.0 / 3.0;

  double sum() const { return correctness + severity + profitability; }
  bool operator==(const ScoreWeights&) const = default;
};

/// Finding + critique + composite score; rank is 1-based after ranking.
struct ScoredFinding {
  Finding finding;
  Critique critique;
  double composite = 0.0;
  int rank = 0;

  bool operator==(const ScoredFinding&) const = default;
};

enum class BackendKind { http, replay };

inline std::string to_string(BackendKind kind) {
  return kind == BackendKind::http ? "http" : "replay";
}

inline BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "http") return BackendKind::http;
  if (s == "replay") return BackendKind::replay;
  throw ConfigError("unknown backend '" + s + "' (expected http or replay)");
}

enum class StrategyKind { A, A_R, A_C, A_O };

inline std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::A: return "A";
    case StrategyKind::A_R: return "A+R";
    case StrategyKind::A_C: return "A+C";
    case StrategyKind::A_O: return "A+O";
  }
  return "A";
}

inline StrategyKind strategy_kind_from_string(const std::string& s) {
  if (s == "A") return StrategyKind::A;
  if (s == "A+R" || s == "A_R") return StrategyKind::A_R;
  if (s == "A+C" || s == "A_C") return StrategyKind::A_C;
  if (s == "A+O" || s == "A_O") return StrategyKind::A_O;
  throw ConfigError("unknown strategy '" + s + "' (expected A, A+R, A+C or A+O)");
}

/// All pipeline hyperparameters for one run.
struct RunConfig {
  int n_auditors = 1;
  int m_max_vulns = 3;
  int k_top = 1;
  double auditor_temperature = 0.7;
  double critic_temperature = 0.0;
  StrategyKind strategy = StrategyKind::A_C;
  int trials = 3;
  std::uint64_t seed = 0;
  int critic_batch_size = 5;
  ScoreWeights score_weights{};
  std::string model_id = "gpt-4";
  BackendKind backend = BackendKind::replay;

  bool operator==(const RunConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string message() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }
};

inline ValidationResult validate_config(const RunConfig& config) {
  ValidationResult result;
  auto fail = [&](const std::string& msg) { result.violations.push_back(msg); };

  if (config.n_auditors < 1) fail("n_auditors must be >= 1");
  if (config.m_max_vulns < 1) fail("m_max_vulns must be >= 1");
  if (config.k_top < 1) fail("k_top must be >= 1");
  if (config.trials < 1) fail("trials must be >= 1");
  if (config.critic_batch_size < 1) fail("critic_batch_size must be >= 1");
  if (!(config.auditor_temperature >= 0.0 && config.auditor_temperature <= 2.0))
    fail("auditor_temperature must be in [0, 2]");
  if (!(config.critic_temperature >= 0.0 && config.critic_temperature <= 2.0))
    fail("critic_temperature must be in [0, 2]");
  if (config.score_weights.correctness < 0.0 || config.score_weights.severity < 0.0 ||
      config.score_weights.profitability < 0.0)
    fail("weights must be non-negative");
  if (!(config.score_weights.sum() > 0.0)) fail("weights must sum > 0");
  if (config.model_id.empty()) fail("model_id must be non-empty");
  return result;
}

inline void validate_label(const GroundTruthLabel& label) {
  if (label.function_name.empty())
    throw ConfigError("label function_name must be non-empty");
  if (label.vulnerability_aliases.empty())
    throw ConfigError("label must carry at least one vulnerability alias");
  for (const auto& alias : label.vulnerability_aliases) {
    if (normalize_name(alias).empty())
      throw ConfigError("label alias '" + alias + "' is empty after normalization");
  }
}

// ---------------------------------------------------------------------------
// Canonical JSON
//
// Field names follow the published record shape where they overlap with it:
// function_name, vulnerability, auditor (the auditor's reasoning text),
// critic (the criticism text), correctness, severity, profitability.
// ---------------------------------------------------------------------------

inline void to_json(json& j, const GroundTruthLabel& label) {
  j = json{{"function_name", label.function_name},
           {"vulnerability_aliases", label.vulnerability_aliases},
           {"description", label.description}};
}

inline void from_json(const json& j, GroundTruthLabel& label) {
  j.at("function_name").get_to(label.function_name);
  j.at("vulnerability_aliases").get_to(label.vulnerability_aliases);
  label.description = j.value("description", "");
  for (auto& alias : label.vulnerability_aliases) alias = normalize_name(alias);
}

inline void to_json(json& j, const ContractCase& c) {
  j = json{{"case_id", c.case_id}, {"source", c.source}};
  if (c.label) j["label"] = *c.label;
}

inline void from_json(const json& j, ContractCase& c) {
  j.at("case_id").get_to(c.case_id);
  j.at("source").get_to(c.source);
  if (j.contains("label") && !j.at("label").is_null())
    c.label = j.at("label").get<GroundTruthLabel>();
  else
    c.label.reset();
}

inline void to_json(json& j, const Finding& f) {
  j = json{{"function_name", f.function_name},
           {"vulnerability", f.vulnerability},
           {"auditor", f.reasoning},
           {"auditor_index", f.auditor_index},
           {"trial_index", f.trial_index}};
}

inline void from_json(const json& j, Finding& f) {
  j.at("function_name").get_to(f.function_name);
  j.at("vulnerability").get_to(f.vulnerability);
  f.reasoning = j.contains("auditor") ? j.at("auditor").get<std::string>()
                                      : j.value("reasoning", "");
  f.auditor_index = j.value("auditor_index", 0);
  f.trial_index = j.value("trial_index", 0);
}

inline void to_json(json& j, const Critique& c) {
  j = json{{"critic", c.criticism},
           {"correctness", c.correctness},
           {"severity", c.severity},
           {"profitability", c.profitability}};
}

inline void from_json(const json& j, Critique& c) {
  c.criticism = j.contains("critic") ? j.at("critic").get<std::string>()
                                     : j.value("criticism", "");
  c.correctness = clamp_score(j.value("correctness", 0LL));
  c.severity = clamp_score(j.value("severity", 0LL));
  c.profitability = clamp_score(j.value("profitability", 0LL));
}

/// Flat record: the published record shape extended with composite and rank.
inline void to_json(json& j, const ScoredFinding& s) {
  j = json{{"function_name", s.finding.function_name},
           {"vulnerability", s.finding.vulnerability},
           {"auditor", s.finding.reasoning},
           {"auditor_index", s.finding.auditor_index},
           {"trial_index", s.finding.trial_index},
           {"critic", s.critique.criticism},
           {"correctness", s.critique.correctness},
           {"severity", s.critique.severity},
           {"profitability", s.critique.profitability},
           {"composite", s.composite},
           {"rank", s.rank}};
}

inline void from_json(const json& j, ScoredFinding& s) {
  s.finding = j.get<Finding>();
  s.critique = j.get<Critique>();
  s.composite = j.value("composite", 0.0);
  s.rank = j.value("rank", 0);
}

inline void to_json(json& j, const ScoreWeights& w) {
  j = json{{"correctness", w.correctness},
           {"severity", w.severity},
           {"profitability", w.profitability}};
}

inline void from_json(const json& j, ScoreWeights& w) {
  j.at("correctness").get_to(w.correctness);
  j.at("severity").get_to(w.severity);
  j.at("profitability").get_to(w.profitability);
}

inline void to_json(json& j, const RunConfig& c) {
  j = json{{"n_auditors", c.n_auditors},
           {"m_max_vulns", c.m_max_vulns},
           {"k_top", c.k_top},
           {"auditor_temperature", c.auditor_temperature},
           {"critic_temperature", c.critic_temperature},
           {"strategy", to_string(c.strategy)},
           {"trials", c.trials},
           {"seed", c.seed},
           {"critic_batch_size", c.critic_batch_size},
           {"score_weights", c.score_weights},
           {"model_id", c.model_id},
           {"backend", to_string(c.backend)}};
}

inline void from_json(const json& j, RunConfig& c) {
  c.n_auditors = j.value("n_auditors", 1);
  c.m_max_vulns = j.value("m_max_vulns", 3);
  c.k_top = j.value("k_top", 1);
  c.auditor_temperature = j.value("auditor_temperature", 0.7);
  c.critic_temperature = j.value("critic_temperature", 0.0);
  if (j.contains("strategy")) c.strategy = strategy_kind_from_string(j.at("strategy"));
  c.trials = j.value("trials", 3);
  c.seed = j.value("seed", std::uint64_t{0});
  c.critic_batch_size = j.value("critic_batch_size", 5);
  if (j.contains("score_weights")) j.at("score_weights").get_to(c.score_weights);
  c.model_id = j.value("model_id", "gpt-4");
  if (j.contains("backend")) c.backend = backend_kind_from_string(j.at("backend"));
}

// ---------------------------------------------------------------------------
// Stable hashing (FNV-1a), used for replay fingerprints and trial seeds.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  h = fnv1a(h, s.data(), s.size());
  h ^= 0xFFu;  // length delimiter so ("a","bc") != ("ab","c")
  h *= kFnvPrime;
  return h;
}

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  return fnv1a(h, buf, sizeof buf);
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace gptlens
