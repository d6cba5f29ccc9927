// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "seaug/error.hpp"
#include "seaug/noise.hpp"
#include "seaug/strategy.hpp"

namespace seaug {

inline constexpr int kManifestSchemaVersion = 1;

enum class Group { kNeurotypical, kPathological };

inline std::string to_string(Group g) {
  return g == Group::kNeurotypical ? "neurotypical" : "pathological";
}

inline Group group_from_string(const std::string& s) {
  if (s == "neurotypical") return Group::kNeurotypical;
  if (s == "pathological") return Group::kPathological;
  throw Error("unknown speaker group: " + s);
}

// How one mixture was produced, including the realized gain and any global
// peak normalization applied at PCM16 export time.
struct MixRecord {
  std::string noise_type;
  double snr_db = 0.0;
  std::uint64_t noise_offset = 0;
  std::uint64_t seed = 0;
  double gain = 0.0;
  std::string noise_file;
  double peak_scale = 1.0;

  MixSpec spec() const { return MixSpec{noise_type, snr_db, noise_offset, seed}; }
};

// Provenance of a derived entry. `params` holds strategy-specific settings as
// printable strings so manifests stay diffable and schema-stable.
struct AugmentationInfo {
  Strategy strategy = Strategy::kNone;
  std::map<std::string, std::string> params;
  std::vector<std::string> parent_utt_ids;
};

struct ManifestEntry {
  std::string utt_id;
  std::string speaker_id;
  Group group = Group::kNeurotypical;
  std::string clean_path;                 // relative to the manifest directory
  std::optional<std::string> noisy_path;  // absent until mixed
  std::optional<MixRecord> mix;
  AugmentationInfo augmentation;
  double duration = 0.0;  // seconds
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(const std::string& utt_id) const {
    for (const auto& e : entries)
      if (e.utt_id == utt_id) return &e;
    return nullptr;
  }
  ManifestEntry* find(const std::string& utt_id) {
    for (auto& e : entries)
      if (e.utt_id == utt_id) return &e;
    return nullptr;
  }
};

namespace detail {

inline nlohmann::json to_json(const ManifestEntry& e) {
  nlohmann::json aug;
  aug["strategy"] = to_string(e.augmentation.strategy);
  aug["params"] = e.augmentation.params;
  aug["parent_utt_ids"] = e.augmentation.parent_utt_ids;

  nlohmann::json j;
  j["schema_version"] = kManifestSchemaVersion;
  j["utt_id"] = e.utt_id;
  j["speaker_id"] = e.speaker_id;
  j["group"] = to_string(e.group);
  j["clean_path"] = e.clean_path;
  j["duration"] = e.duration;
  j["augmentation"] = aug;
  if (e.noisy_path) j["noisy_path"] = *e.noisy_path;
  if (e.mix) {
    nlohmann::json m;
    m["noise_type"] = e.mix->noise_type;
    m["snr_db"] = e.mix->snr_db;
    m["noise_offset"] = e.mix->noise_offset;
    m["seed"] = e.mix->seed;
    m["gain"] = e.mix->gain;
    m["noise_file"] = e.mix->noise_file;
    m["peak_scale"] = e.mix->peak_scale;
    j["mix"] = m;
  }
  return j;
}

inline ManifestEntry entry_from_json(const nlohmann::json& j) {
  if (!j.contains("schema_version") ||
      j.at("schema_version").get<int>() != kManifestSchemaVersion)
    throw Error("manifest line has missing or unsupported schema_version");
  ManifestEntry e;
  e.utt_id = j.at("utt_id").get<std::string>();
  e.speaker_id = j.at("speaker_id").get<std::string>();
  e.group = group_from_string(j.at("group").get<std::string>());
  e.clean_path = j.at("clean_path").get<std::string>();
  e.duration = j.at("duration").get<double>();
  const auto& aug = j.at("augmentation");
  e.augmentation.strategy =
      strategy_from_string(aug.at("strategy").get<std::string>());
  e.augmentation.params =
      aug.at("params").get<std::map<std::string, std::string>>();
  e.augmentation.parent_utt_ids =
      aug.at("parent_utt_ids").get<std::vector<std::string>>();
  if (j.contains("noisy_path"))
    e.noisy_path = j.at("noisy_path").get<std::string>();
  if (j.contains("mix")) {
    const auto& m = j.at("mix");
    MixRecord r;
    r.noise_type = m.at("noise_type").get<std::string>();
    r.snr_db = m.at("snr_db").get<double>();
    r.noise_offset = m.at("noise_offset").get<std::uint64_t>();
    r.seed = m.at("seed").get<std::uint64_t>();
    r.gain = m.at("gain").get<double>();
    r.noise_file = m.at("noise_file").get<std::string>();
    r.peak_scale = m.at("peak_scale").get<double>();
    e.mix = r;
  }
  return e;
}

}  // namespace detail

// Checks the structural rules: unique ids, resolvable parents, and parent
// chains that terminate at original entries.
inline void validate_manifest(const Manifest& manifest) {
  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& e : manifest.entries) {
    if (e.utt_id.empty()) throw Error("manifest: empty utt_id");
    if (!by_id.emplace(e.utt_id, &e).second)
      throw Error("manifest: duplicate utt_id " + e.utt_id);
  }
  for (const auto& e : manifest.entries) {
    if (e.augmentation.strategy == Strategy::kNone &&
        !e.augmentation.parent_utt_ids.empty())
      throw Error("manifest: original entry " + e.utt_id + " has parents");
    // Walk to the root, guarding against cycles.
    std::set<std::string> seen;
    const ManifestEntry* cur = &e;
    while (!cur->augmentation.parent_utt_ids.empty()) {
      const std::string& pid = cur->augmentation.parent_utt_ids.front();
      if (!seen.insert(cur->utt_id).second)
        throw Error("manifest: provenance cycle at " + cur->utt_id);
      auto it = by_id.find(pid);
      if (it == by_id.end())
        throw Error("manifest: " + cur->utt_id + " references missing parent " +
                    pid);
      cur = it->second;
    }
    if (cur != &e && cur->augmentation.strategy != Strategy::kNone)
      throw Error("manifest: parent chain of " + e.utt_id +
                  " does not end at an original entry");
  }
}

// One JSON object per line, keys alphabetical, entries ordered by utt_id, so
// equal manifests serialize to identical bytes.
inline void save_manifest(const Manifest& manifest,
                          const std::filesystem::path& path) {
  validate_manifest(manifest);
  Manifest sorted = manifest;
  std::sort(sorted.entries.begin(), sorted.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.utt_id < b.utt_id;
            });
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest: " + path.string());
  for (const auto& e : sorted.entries) out << detail::to_json(e).dump() << "\n";
  if (!out) throw Error("manifest write failed: " + path.string());
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest: " + path.string());
  Manifest manifest;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw Error("manifest " + path.string() + " line " +
                  std::to_string(lineno) + ": " + ex.what());
    }
    manifest.entries.push_back(detail::entry_from_json(j));
  }
  validate_manifest(manifest);
  return manifest;
}

}  // namespace seaug
