// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "seaug/plan.hpp"
#include "support/fixtures.hpp"

using seaug::AugPlan;
using seaug::FoldSplit;
using seaug::Group;
using seaug::Manifest;
using seaug::ManifestEntry;
using seaug::Strategy;

namespace {

ManifestEntry original(const std::string& speaker, int index, Group group) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%02d", index);
  ManifestEntry e;
  e.utt_id = speaker + "_" + buf;
  e.speaker_id = speaker;
  e.group = group;
  e.clean_path = "clean/" + speaker + "/" + e.utt_id + ".wav";
  e.duration = 1.0;
  return e;
}

// NT01 has 12 originals, NT02 has 5; PT01/PT02 hold the held-out partitions.
Manifest desk_manifest() {
  Manifest m;
  for (int i = 1; i <= 12; ++i)
    m.entries.push_back(original("NT01", i, Group::kNeurotypical));
  for (int i = 1; i <= 5; ++i)
    m.entries.push_back(original("NT02", i, Group::kNeurotypical));
  for (int i = 1; i <= 3; ++i)
    m.entries.push_back(original("PT01", i, Group::kPathological));
  for (int i = 1; i <= 3; ++i)
    m.entries.push_back(original("PT02", i, Group::kPathological));
  return m;
}

FoldSplit::Fold desk_fold() {
  FoldSplit::Fold fold;
  fold.train = {"NT01", "NT02"};
  fold.validation = {"PT02"};
  fold.test = {"PT01"};
  return fold;
}

int items_for(const AugPlan& plan, const std::string& speaker) {
  int n = 0;
  for (const auto& item : plan.items)
    if (item.speaker_id == speaker) ++n;
  return n;
}

}  // namespace

TEST_CASE("ratios translate into per-speaker item counts", "[plan]") {
  const Manifest m = desk_manifest();
  const FoldSplit::Fold fold = desk_fold();

  const AugPlan p25 =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 25, 1);
  REQUIRE(items_for(p25, "NT01") == 3);
  REQUIRE(items_for(p25, "NT02") == 1);  // 0.25 * 5 = 1.25 rounds half up to 1
  REQUIRE(p25.items.size() == 4);

  const AugPlan p100 =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 100, 1);
  REQUIRE(items_for(p100, "NT01") == 12);
  REQUIRE(items_for(p100, "NT02") == 5);

  const AugPlan p400 =
      seaug::plan_augmentation(m, fold, Strategy::kTimeStretch, 400, 1);
  REQUIRE(items_for(p400, "NT01") == 48);
  REQUIRE(items_for(p400, "NT02") == 20);

  // At 400% the (parent, variant) universe is used exactly once in full.
  std::set<std::pair<std::string, int>> seen;
  for (const auto& item : p400.items)
    REQUIRE(seen.insert({item.parent_utt_id, item.variant_index}).second);
  REQUIRE(seen.size() == 68);
  for (const auto& item : p400.items) {
    REQUIRE(item.variant_index >= 0);
    REQUIRE(item.variant_index < 4);
  }
}

TEST_CASE("plans never touch held-out speakers", "[plan]") {
  const Manifest m = desk_manifest();
  const FoldSplit::Fold fold = desk_fold();
  for (Strategy s : {Strategy::kPitchShift, Strategy::kTimeStretch,
                     Strategy::kSpecMix, Strategy::kNoiseAdd}) {
    const AugPlan plan = seaug::plan_augmentation(m, fold, s, 100, 9);
    REQUIRE_FALSE(plan.items.empty());
    for (const auto& item : plan.items) {
      REQUIRE((item.speaker_id == "NT01" || item.speaker_id == "NT02"));
      REQUIRE(item.parent_utt_id.rfind(item.speaker_id, 0) == 0);
    }
  }
}

TEST_CASE("invalid requests are rejected up front", "[plan]") {
  const Manifest m = desk_manifest();
  const FoldSplit::Fold fold = desk_fold();
  REQUIRE_THROWS_AS(
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 50, 1),
      seaug::UsageError);
  REQUIRE_THROWS_AS(seaug::plan_augmentation(m, fold, Strategy::kNone, 100, 1),
                    seaug::UsageError);
  REQUIRE_THROWS_WITH(
      seaug::plan_augmentation(m, fold, Strategy::kSynthetic, 400, 1),
      Catch::Matchers::ContainsSubstring("capped at a 100% ratio"));

  FoldSplit::Fold empty_train = fold;
  empty_train.train = {"PT03"};  // speaker with no entries at all
  REQUIRE_THROWS_WITH(
      seaug::plan_augmentation(m, empty_train, Strategy::kPitchShift, 100, 1),
      Catch::Matchers::ContainsSubstring("no original utterances"));
}

TEST_CASE("plans replay from the master seed", "[plan]") {
  const Manifest m = desk_manifest();
  const FoldSplit::Fold fold = desk_fold();
  const AugPlan a =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 25, 42);
  const AugPlan b =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 25, 42);
  REQUIRE(a.items.size() == b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    REQUIRE(a.items[i].new_utt_id == b.items[i].new_utt_id);
    REQUIRE(a.items[i].seed == b.items[i].seed);
    REQUIRE(a.items[i].params == b.items[i].params);
  }

  // A different master seed picks a different subset (or at least different
  // item seeds, which it must by construction).
  const AugPlan c =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 25, 43);
  bool differs = a.items.size() != c.items.size();
  for (std::size_t i = 0; !differs && i < a.items.size(); ++i)
    differs = a.items[i].new_utt_id != c.items[i].new_utt_id ||
              a.items[i].seed != c.items[i].seed;
  REQUIRE(differs);
}

TEST_CASE("item naming, parameters and seeds follow the derivation scheme",
          "[plan]") {
  const Manifest m = desk_manifest();
  const FoldSplit::Fold fold = desk_fold();

  const AugPlan pitch =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 400, 7);
  for (const auto& item : pitch.items) {
    REQUIRE(item.new_utt_id == item.parent_utt_id + "_pitch_shift_v" +
                                   std::to_string(item.variant_index));
    char want[32];
    std::snprintf(want, sizeof want, "%.6f",
                  seaug::kPitchShiftSemitones[static_cast<std::size_t>(
                      item.variant_index)]);
    REQUIRE(item.params.at("semitones") == want);
    REQUIRE(item.seed ==
            seaug::derive_seed(7, "aug:pitch_shift:" + item.parent_utt_id +
                                      ":" + std::to_string(item.variant_index)));
  }

  const AugPlan stretch =
      seaug::plan_augmentation(m, fold, Strategy::kTimeStretch, 100, 7);
  for (const auto& item : stretch.items) {
    char want[32];
    std::snprintf(want, sizeof want, "%.6f",
                  seaug::kTimeStretchRates[static_cast<std::size_t>(
                      item.variant_index)]);
    REQUIRE(item.params.at("ratio") == want);
  }

  const AugPlan noise =
      seaug::plan_augmentation(m, fold, Strategy::kNoiseAdd, 100, 7);
  for (const auto& item : noise.items) REQUIRE(item.params.empty());
}

TEST_CASE("cross-utterance width draws are fixed per parent", "[plan]") {
  const Manifest m = desk_manifest();
  const FoldSplit::Fold fold = desk_fold();
  const AugPlan plan =
      seaug::plan_augmentation(m, fold, Strategy::kSpecMix, 400, 5);

  // The partner pool is exactly the training originals.
  REQUIRE(plan.partner_pool.size() == 17);
  for (const auto& id : plan.partner_pool)
    REQUIRE((id.rfind("NT01", 0) == 0 || id.rfind("NT02", 0) == 0));

  for (const auto& item : plan.items) {
    seaug::Rng gamma_rng(seaug::derive_seed(5, "specmix_gamma:" +
                                                   item.parent_utt_id));
    const auto gammas = seaug::specmix_gammas(gamma_rng);
    char want[32];
    std::snprintf(want, sizeof want, "%.6f",
                  gammas[static_cast<std::size_t>(item.variant_index)]);
    REQUIRE(item.params.at("gamma") == want);
  }

  const AugPlan other =
      seaug::plan_augmentation(m, fold, Strategy::kPitchShift, 100, 5);
  REQUIRE(other.partner_pool.empty());
}

TEST_CASE("generated speech plans draw from the ingested pool", "[plan]") {
  Manifest m = desk_manifest();
  // Three ingested items for NT01, one for NT02.
  for (int i = 0; i < 3; ++i) {
    ManifestEntry e;
    e.utt_id = "NT01_syn" + std::to_string(i);
    e.speaker_id = "NT01";
    e.group = Group::kNeurotypical;
    e.clean_path = "synthetic/NT01/" + e.utt_id + ".wav";
    e.duration = 1.0;
    e.augmentation.strategy = Strategy::kSynthetic;
    e.augmentation.params = {{"generator", "desk_tts"}};
    e.augmentation.parent_utt_ids = {"NT01_u01"};
    m.entries.push_back(e);
  }
  ManifestEntry e;
  e.utt_id = "NT02_syn0";
  e.speaker_id = "NT02";
  e.group = Group::kNeurotypical;
  e.clean_path = "synthetic/NT02/NT02_syn0.wav";
  e.duration = 1.0;
  e.augmentation.strategy = Strategy::kSynthetic;
  e.augmentation.params = {{"generator", "desk_tts"}};
  e.augmentation.parent_utt_ids = {"NT02_u01"};
  m.entries.push_back(e);

  const FoldSplit::Fold fold = desk_fold();

  // 25%: NT01 wants 3 (exactly the pool), NT02 wants 1.
  const AugPlan plan =
      seaug::plan_augmentation(m, fold, Strategy::kSynthetic, 25, 3);
  REQUIRE(items_for(plan, "NT01") == 3);
  REQUIRE(items_for(plan, "NT02") == 1);
  for (const auto& item : plan.items) {
    REQUIRE(item.new_utt_id == item.parent_utt_id);
    REQUIRE(item.new_utt_id.find("_syn") != std::string::npos);
    REQUIRE(item.params.at("generator") == "desk_tts");
  }

  // 100%: NT01 wants 12 but only 3 ingested items exist.
  REQUIRE_THROWS_WITH(
      seaug::plan_augmentation(m, fold, Strategy::kSynthetic, 100, 3),
      Catch::Matchers::ContainsSubstring("variants exist"));
}
