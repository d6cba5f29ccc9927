// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seaug/augment.hpp"
#include "seaug/error.hpp"
#include "seaug/folds.hpp"
#include "seaug/manifest.hpp"
#include "seaug/rng.hpp"
#include "seaug/strategy.hpp"

namespace seaug {

inline const std::vector<int>& allowed_ratios() {
  static const std::vector<int> ratios = {25, 100, 400};
  return ratios;
}

struct AugPlanItem {
  std::string speaker_id;
  std::string parent_utt_id;
  int variant_index = 0;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string new_utt_id;
};

struct AugPlan {
  Strategy strategy = Strategy::kNone;
  int ratio_percent = 0;
  std::vector<AugPlanItem> items;
  // Candidate partners for cross-utterance mixing: all mixable parents in the
  // fold's training partition, so materialization cannot reach held-out data.
  std::vector<std::string> partner_pool;
};

namespace detail {

inline std::string format_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline int round_half_up(double x) {
  return static_cast<int>(std::floor(x + 0.5));
}

}  // namespace detail

// Chooses which augmented items to build for one fold: per training speaker,
// round(ratio * original utterance count) items are drawn uniformly without
// replacement from that speaker's generated-variant universe; at 400% the
// universe is used exactly once in full.
inline AugPlan plan_augmentation(const Manifest& manifest,
                                 const FoldSplit::Fold& fold,
                                 Strategy strategy, int ratio_percent,
                                 std::uint64_t master_seed) {
  if (strategy == Strategy::kNone)
    throw UsageError("cannot plan augmentation for original entries");
  if (std::find(allowed_ratios().begin(), allowed_ratios().end(),
                ratio_percent) == allowed_ratios().end())
    throw UsageError("augmentation ratio must be one of 25, 100, 400");
  if (strategy == Strategy::kSynthetic && ratio_percent == 400)
    throw UsageError(
        "synthetic augmentation is capped at a 100% ratio; 400% is not "
        "available for generated speech");

  const std::set<std::string> train(fold.train.begin(), fold.train.end());

  // Original utterances per training speaker, in canonical id order.
  std::map<std::string, std::vector<const ManifestEntry*>> originals;
  std::map<std::string, std::vector<const ManifestEntry*>> synthetic;
  for (const auto& e : manifest.entries) {
    if (train.count(e.speaker_id) == 0) continue;
    if (e.augmentation.strategy == Strategy::kNone)
      originals[e.speaker_id].push_back(&e);
    else if (e.augmentation.strategy == Strategy::kSynthetic &&
             !e.noisy_path)
      synthetic[e.speaker_id].push_back(&e);
  }
  for (auto* groups : {&originals, &synthetic})
    for (auto& [spk, list] : *groups)
      std::sort(list.begin(), list.end(),
                [](const ManifestEntry* a, const ManifestEntry* b) {
                  return a->utt_id < b->utt_id;
                });
  if (originals.empty())
    throw Error("plan_augmentation: no original utterances in the training "
                "partition");

  AugPlan plan;
  plan.strategy = strategy;
  plan.ratio_percent = ratio_percent;
  if (strategy == Strategy::kSpecMix)
    for (const auto& [spk, list] : originals)
      for (const ManifestEntry* e : list)
        plan.partner_pool.push_back(e->utt_id);

  const std::string tag = to_string(strategy);
  for (const auto& [speaker, parents] : originals) {
    // Universe of candidate items for this speaker.
    struct Candidate {
      const ManifestEntry* parent;
      int variant;
    };
    std::vector<Candidate> universe;
    if (strategy == Strategy::kSynthetic) {
      auto it = synthetic.find(speaker);
      if (it != synthetic.end())
        for (const ManifestEntry* e : it->second)
          universe.push_back(Candidate{e, 0});
    } else {
      for (const ManifestEntry* e : parents)
        for (int v = 0; v < kVariantsPerUtterance; ++v)
          universe.push_back(Candidate{e, v});
    }

    const int want = detail::round_half_up(
        ratio_percent / 100.0 * static_cast<double>(parents.size()));
    if (want == 0) continue;
    if (want > static_cast<int>(universe.size()))
      throw Error("plan_augmentation: speaker " + speaker + " needs " +
                  std::to_string(want) + " items but only " +
                  std::to_string(universe.size()) + " variants exist");

    std::vector<std::size_t> picked(universe.size());
    for (std::size_t i = 0; i < picked.size(); ++i) picked[i] = i;
    if (want < static_cast<int>(universe.size())) {
      Rng rng(derive_seed(master_seed, "plan:" + tag + ":" + speaker));
      // Partial Fisher-Yates: the first `want` slots become the sample.
      for (int i = 0; i < want; ++i) {
        const auto j = i + static_cast<std::size_t>(
                               rng.below(picked.size() - static_cast<std::size_t>(i)));
        std::swap(picked[static_cast<std::size_t>(i)], picked[j]);
      }
      picked.resize(static_cast<std::size_t>(want));
      std::sort(picked.begin(), picked.end());
    }

    for (std::size_t idx : picked) {
      const Candidate& c = universe[idx];
      AugPlanItem item;
      item.speaker_id = speaker;
      item.parent_utt_id = c.parent->utt_id;
      item.variant_index = c.variant;
      item.seed = derive_seed(master_seed, "aug:" + tag + ":" +
                                               c.parent->utt_id + ":" +
                                               std::to_string(c.variant));
      switch (strategy) {
        case Strategy::kPitchShift:
          item.params["semitones"] = detail::format_param(
              kPitchShiftSemitones[static_cast<std::size_t>(c.variant)]);
          break;
        case Strategy::kTimeStretch:
          item.params["ratio"] = detail::format_param(
              kTimeStretchRates[static_cast<std::size_t>(c.variant)]);
          break;
        case Strategy::kSpecMix: {
          // The fourth width parameter is a fresh uniform draw, fixed per
          // parent utterance no matter which variants get sampled.
          Rng gamma_rng(
              derive_seed(master_seed, "specmix_gamma:" + c.parent->utt_id));
          const std::array<double, 4> gammas = specmix_gammas(gamma_rng);
          item.params["gamma"] = detail::format_param(
              gammas[static_cast<std::size_t>(c.variant)]);
          break;
        }
        case Strategy::kNoiseAdd:
          break;  // the mixture spec is drawn from the item seed later
        case Strategy::kSynthetic:
          item.params = c.parent->augmentation.params;
          break;
        default:
          throw Error("plan_augmentation: unsupported strategy");
      }
      item.new_utt_id = strategy == Strategy::kSynthetic
                            ? c.parent->utt_id
                            : c.parent->utt_id + "_" + tag + "_v" +
                                  std::to_string(c.variant);
      plan.items.push_back(std::move(item));
    }
  }
  return plan;
}

}  // namespace seaug
