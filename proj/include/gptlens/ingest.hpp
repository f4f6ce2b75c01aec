#pragma once

#include "gptlens/core.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace gptlens {

// ---------------------------------------------------------------------------
// Dataset manifest
//
// JSON file mapping case_id -> relative contract source path plus an
// optional ground-truth label:
//
//   {
//     "version": "gptlens-manifest/1",
//     "cases": [
//       {
//         "case_id": "2018-19830",
//         "source_path": "contracts/2018-19830.sol",
//         "label": {
//           "function_name": "UBSexToken",
//           "vulnerability_aliases": ["constructor typo", "unexpected behaviour"],
//           "description": "..."
//         }
//       }
//     ]
//   }
//
// source_path is resolved against the manifest's directory.
// ---------------------------------------------------------------------------

inline constexpr const char* kManifestVersion = "gptlens-manifest/1";

struct ManifestEntry {
  std::string case_id;
  std::string source_path;
  std::optional<GroundTruthLabel> label;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline DatasetManifest parse_manifest(const json& doc, const std::filesystem::path& root) {
  if (!doc.is_object() || !doc.contains("cases") || !doc.at("cases").is_array())
    throw DatasetError("manifest must be an object with a 'cases' array");
  const std::string version = doc.value("version", "");
  if (!version.empty() && version != kManifestVersion)
    throw DatasetError("unsupported manifest version '" + version + "'");

  DatasetManifest manifest;
  manifest.root = root;
  std::set<std::string> seen;
  std::size_t index = 0;
  for (const auto& entry_json : doc.at("cases")) {
    ManifestEntry entry;
    if (!entry_json.is_object() || !entry_json.contains("case_id") ||
        !entry_json.contains("source_path"))
      throw DatasetError("manifest entry " + std::to_string(index) +
                         " must carry case_id and source_path");
    entry.case_id = entry_json.at("case_id").get<std::string>();
    entry.source_path = entry_json.at("source_path").get<std::string>();
    if (entry.case_id.empty())
      throw DatasetError("manifest entry " + std::to_string(index) + " has empty case_id");
    if (!seen.insert(entry.case_id).second)
      throw DatasetError("duplicate case_id '" + entry.case_id + "' in manifest");
    if (entry_json.contains("label") && !entry_json.at("label").is_null()) {
      entry.label = entry_json.at("label").get<GroundTruthLabel>();
      try {
        validate_label(*entry.label);
      } catch (const ConfigError& e) {
        throw DatasetError("case '" + entry.case_id + "': " + e.what());
      }
    }
    manifest.entries.push_back(std::move(entry));
    ++index;
  }
  return manifest;
}

inline DatasetManifest load_manifest(const std::filesystem::path& manifest_path) {
  const std::string text = read_text_file(manifest_path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw DatasetError("malformed manifest (not valid JSON): " + manifest_path.string());
  return parse_manifest(doc, manifest_path.parent_path());
}

/// Loads every entry of the manifest into a ContractCase, order preserved.
inline std::vector<ContractCase> load_dataset(const std::filesystem::path& manifest_path) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  std::vector<ContractCase> cases;
  cases.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    ContractCase c;
    c.case_id = entry.case_id;
    const auto source_path = manifest.root / entry.source_path;
    try {
      c.source = read_text_file(source_path);
    } catch (const DatasetError& e) {
      throw DatasetError("case '" + entry.case_id + "': " + e.what());
    }
    if (c.source.empty())
      throw DatasetError("case '" + entry.case_id + "': source file is empty: " +
                         source_path.string());
    c.label = entry.label;
    cases.push_back(std::move(c));
  }
  return cases;
}

inline const ContractCase* find_case(const std::vector<ContractCase>& dataset,
                                     const std::string& case_id) {
  for (const auto& c : dataset) {
    if (c.case_id == case_id) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Token estimation
//
// ceil(len/4) on characters. A deterministic upper-bound heuristic; it only
// gates batch splitting, so tokenizer exactness is unneeded.
// ---------------------------------------------------------------------------

inline std::size_t estimate_tokens(const std::string& text) {
  return (text.size() + 3) / 4;
}

}  // namespace gptlens
