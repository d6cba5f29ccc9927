// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "seaug/error.hpp"
#include "seaug/manifest.hpp"
#include "seaug/rng.hpp"

namespace seaug {

struct SpeakerInfo {
  std::string speaker_id;
  Group group = Group::kNeurotypical;
};

struct FoldSplit {
  struct Fold {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
  };
  int fold_count = 0;
  std::vector<Fold> folds;
};

// Structural rules: per-fold partitions are disjoint and non-empty, test sets
// are pairwise disjoint across folds, and all test sets together cover every
// speaker exactly once.
inline void validate_folds(const FoldSplit& split) {
  if (split.fold_count != static_cast<int>(split.folds.size()))
    throw Error("folds: fold_count does not match fold list");
  std::set<std::string> all_test;
  for (const auto& fold : split.folds) {
    if (fold.train.empty() || fold.validation.empty() || fold.test.empty())
      throw Error("folds: a fold has an empty partition");
    std::set<std::string> seen;
    for (const auto* part : {&fold.train, &fold.validation, &fold.test})
      for (const std::string& s : *part)
        if (!seen.insert(s).second)
          throw Error("folds: speaker " + s + " appears in two partitions");
    for (const std::string& s : fold.test)
      if (!all_test.insert(s).second)
        throw Error("folds: speaker " + s + " tested in two folds");
  }
  for (const auto& fold : split.folds)
    for (const auto* part : {&fold.train, &fold.validation})
      for (const std::string& s : *part)
        if (all_test.count(s) == 0)
          throw Error("folds: speaker " + s + " never reaches a test set");
}

// Speaker-independent k-fold assignment. Speakers are shuffled within their
// group, interleaved proportionally so any contiguous block stays
// group-balanced, and cut into k test blocks; fold i validates on fold
// (i+1)'s test block and trains on the rest.
inline FoldSplit build_folds(const std::vector<SpeakerInfo>& speakers, int k,
                             std::uint64_t seed) {
  if (k < 3)
    throw UsageError("fold count must be at least 3 so that train, "
                     "validation and test stay disjoint");
  if (static_cast<int>(speakers.size()) < k)
    throw UsageError("fewer speakers (" + std::to_string(speakers.size()) +
                     ") than folds (" + std::to_string(k) + ")");

  std::map<std::string, std::vector<std::string>> by_group;
  std::set<std::string> ids;
  for (const auto& s : speakers) {
    if (!ids.insert(s.speaker_id).second)
      throw Error("build_folds: duplicate speaker " + s.speaker_id);
    by_group[to_string(s.group)].push_back(s.speaker_id);
  }

  struct Keyed {
    double key;
    std::string group;
    std::string speaker;
  };
  std::vector<Keyed> keyed;
  for (auto& [group, list] : by_group) {
    std::sort(list.begin(), list.end());
    Rng rng(derive_seed(seed, "folds:" + group));
    rng.shuffle(list);
    const auto n = static_cast<double>(list.size());
    for (std::size_t j = 0; j < list.size(); ++j)
      keyed.push_back(Keyed{(static_cast<double>(j) + 0.5) / n, group, list[j]});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.group < b.group;
  });

  const auto n = static_cast<std::int64_t>(keyed.size());
  auto block_start = [&](int i) { return n * i / k; };

  FoldSplit split;
  split.fold_count = k;
  split.folds.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& fold = split.folds[static_cast<std::size_t>(i)];
    const int vi = (i + 1) % k;
    const std::int64_t t0 = block_start(i), t1 = block_start(i + 1);
    const std::int64_t v0 = block_start(vi), v1 = block_start(vi + 1);
    for (std::int64_t j = 0; j < n; ++j) {
      const std::string& s = keyed[static_cast<std::size_t>(j)].speaker;
      if (j >= t0 && j < t1)
        fold.test.push_back(s);
      else if (j >= v0 && j < v1)
        fold.validation.push_back(s);
      else
        fold.train.push_back(s);
    }
  }
  validate_folds(split);
  return split;
}

inline void save_fold_split(const FoldSplit& split,
                            const std::filesystem::path& path) {
  validate_folds(split);
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : split.folds) {
    nlohmann::json f;
    f["train"] = fold.train;
    f["validation"] = fold.validation;
    f["test"] = fold.test;
    folds.push_back(f);
  }
  nlohmann::json j;
  j["fold_count"] = split.fold_count;
  j["folds"] = folds;
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write fold file: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error("fold file write failed: " + path.string());
}

inline FoldSplit load_fold_split(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open fold file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error("fold file " + path.string() + ": " + ex.what());
  }
  FoldSplit split;
  split.fold_count = j.at("fold_count").get<int>();
  for (const auto& f : j.at("folds")) {
    FoldSplit::Fold fold;
    fold.train = f.at("train").get<std::vector<std::string>>();
    fold.validation = f.at("validation").get<std::vector<std::string>>();
    fold.test = f.at("test").get<std::vector<std::string>>();
    split.folds.push_back(std::move(fold));
  }
  validate_folds(split);
  return split;
}

}  // namespace seaug
