// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seaug/augment.hpp"
#include "seaug/error.hpp"
#include "seaug/manifest.hpp"
#include "seaug/noise.hpp"
#include "seaug/parallel.hpp"
#include "seaug/plan.hpp"
#include "seaug/resample.hpp"
#include "seaug/specmix.hpp"
#include "seaug/wav.hpp"

namespace seaug {

struct MaterializeConfig {
  std::filesystem::path root;  // corpus root; manifest paths resolve here
  StftConfig stft;             // signal-model geometry for cross-utterance mixing
  double clip_guard = 0.99;    // PCM16 peak target when rescaling is needed
  int jobs = 1;
};

namespace detail {

inline std::string relative_wav_path(const std::string& tree,
                                     const std::string& speaker,
                                     const std::string& utt_id) {
  return tree + "/" + speaker + "/" + utt_id + ".wav";
}

inline std::string describe_mask(const TfMask& mask) {
  std::ostringstream out;
  out << "f";
  for (const Band& b : mask.freq_bands) out << ":" << b.start << "+" << b.width;
  out << ";t";
  for (const Band& b : mask.time_bands) out << ":" << b.start << "+" << b.width;
  return out.str();
}

struct BuiltItem {
  ManifestEntry entry;
  // Audio staged for writing after the global peak policy is applied; the
  // string is the manifest-relative path.
  std::vector<std::pair<std::string, AudioBuffer>> files;
  bool replaces_existing = false;  // in-place update (ingested clean entries)
};

}  // namespace detail

// Builds every planned item, applies one corpus-wide peak-normalization
// factor to everything written in this run (recorded per entry), writes the
// audio, and returns the manifest extended with the new entries. Derived
// audio never comes from held-out speakers: the plan's parent and partner
// references were restricted to the fold's training partition.
inline Manifest materialize(const AugPlan& plan, const Manifest& manifest,
                            const NoiseCorpus* noise,
                            const MaterializeConfig& cfg) {
  check_stft_config(cfg.stft);
  if (plan.strategy != Strategy::kSpecMix && !noise)
    throw Error("materialize: this strategy mixes fresh noise and needs a "
                "noise corpus");

  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& e : manifest.entries) by_id[e.utt_id] = &e;
  for (const auto& item : plan.items) {
    if (by_id.find(item.parent_utt_id) == by_id.end())
      throw Error("materialize: plan references missing parent " +
                  item.parent_utt_id);
    if (plan.strategy != Strategy::kSynthetic &&
        by_id.find(item.new_utt_id) != by_id.end())
      throw Error("materialize: id collision for " + item.new_utt_id);
  }

  auto load_rel = [&](const std::string& rel) {
    return load_wav(cfg.root / rel);
  };

  std::vector<detail::BuiltItem> built(plan.items.size());
  parallel_for(plan.items.size(), cfg.jobs, [&](std::size_t i) {
    const AugPlanItem& item = plan.items[i];
    const ManifestEntry& parent = *by_id.at(item.parent_utt_id);
    detail::BuiltItem out;
    ManifestEntry e;
    e.utt_id = item.new_utt_id;
    e.speaker_id = parent.speaker_id;
    e.group = parent.group;
    e.augmentation.strategy = plan.strategy;
    e.augmentation.params = item.params;
    e.augmentation.parent_utt_ids = {item.parent_utt_id};
    Rng rng(item.seed);

    switch (plan.strategy) {
      case Strategy::kPitchShift:
      case Strategy::kTimeStretch: {
        const AudioBuffer parent_clean = load_rel(parent.clean_path);
        AudioBuffer aug_clean =
            plan.strategy == Strategy::kPitchShift
                ? pitch_shift(parent_clean,
                              PitchShiftSpec{std::stod(item.params.at(
                                  "semitones"))})
                : time_stretch(parent_clean, TimeStretchSpec{std::stod(
                                                 item.params.at("ratio"))});
        MixOutcome mix =
            mix_at_snr(aug_clean, *noise, sample_mix_spec(rng, noise->types()));
        e.clean_path =
            detail::relative_wav_path("clean", e.speaker_id, e.utt_id);
        e.noisy_path =
            detail::relative_wav_path("noisy", e.speaker_id, e.utt_id);
        e.mix = MixRecord{mix.spec.noise_type, mix.spec.snr_db,
                          mix.spec.noise_offset, mix.spec.seed,
                          mix.gain,          mix.noise_file,
                          1.0};
        e.duration = aug_clean.duration();
        out.files.emplace_back(e.clean_path, std::move(aug_clean));
        out.files.emplace_back(*e.noisy_path, std::move(mix.noisy));
        break;
      }
      case Strategy::kNoiseAdd: {
        const AudioBuffer parent_clean = load_rel(parent.clean_path);
        MixOutcome mix = mix_at_snr(parent_clean, *noise,
                                    sample_mix_spec(rng, noise->types()));
        e.clean_path = parent.clean_path;  // the clean signal is untouched
        e.noisy_path =
            detail::relative_wav_path("noisy", e.speaker_id, e.utt_id);
        e.mix = MixRecord{mix.spec.noise_type, mix.spec.snr_db,
                          mix.spec.noise_offset, mix.spec.seed,
                          mix.gain,          mix.noise_file,
                          1.0};
        e.duration = parent_clean.duration();
        out.files.emplace_back(*e.noisy_path, std::move(mix.noisy));
        break;
      }
      case Strategy::kSynthetic: {
        const AudioBuffer synth_clean = load_rel(parent.clean_path);
        MixOutcome mix = mix_at_snr(synth_clean, *noise,
                                    sample_mix_spec(rng, noise->types()));
        e = parent;  // keep the ingested entry, add the mixture
        e.noisy_path =
            detail::relative_wav_path("noisy", e.speaker_id, e.utt_id);
        e.mix = MixRecord{mix.spec.noise_type, mix.spec.snr_db,
                          mix.spec.noise_offset, mix.spec.seed,
                          mix.gain,          mix.noise_file,
                          1.0};
        out.files.emplace_back(*e.noisy_path, std::move(mix.noisy));
        out.replaces_existing = true;
        break;
      }
      case Strategy::kSpecMix: {
        if (!parent.noisy_path)
          throw Error("materialize: cross-utterance mixing needs mixed "
                      "parents; run the mix step first (" +
                      parent.utt_id + ")");
        std::vector<std::string> candidates;
        for (const std::string& id : plan.partner_pool)
          if (id != parent.utt_id) candidates.push_back(id);
        if (candidates.empty())
          throw Error("materialize: no partner available for " +
                      parent.utt_id);
        const std::string& partner_id = candidates[static_cast<std::size_t>(
            rng.below(candidates.size()))];
        const ManifestEntry& partner = *by_id.at(partner_id);
        if (!partner.noisy_path)
          throw Error("materialize: partner " + partner_id +
                      " has no mixture; run the mix step first");

        const double gamma = std::stod(item.params.at("gamma"));
        SpectrogramPair a{stft(load_rel(parent.clean_path), cfg.stft),
                          stft(load_rel(*parent.noisy_path), cfg.stft)};
        SpectrogramPair b{stft(load_rel(partner.clean_path), cfg.stft),
                          stft(load_rel(*partner.noisy_path), cfg.stft)};
        int frames = 0;
        for (const Spectrogram* s :
             {&a.clean, &a.noisy, &b.clean, &b.noisy})
          frames = std::max(frames, s->num_frames());
        const TfMask mask = sample_tf_mask(
            cfg.stft.bins(), frames,
            SpecMixSpec{gamma, kMaxMaskBands, kMaxMaskBands, item.seed}, rng);
        SpectrogramPair mixed = spec_mix(a, b, mask);

        AudioBuffer mixed_clean = istft(mixed.clean);
        AudioBuffer mixed_noisy = istft(mixed.noisy);
        e.augmentation.parent_utt_ids = {item.parent_utt_id, partner_id};
        e.augmentation.params["partner"] = partner_id;
        e.augmentation.params["mask"] = detail::describe_mask(mask);
        e.clean_path =
            detail::relative_wav_path("clean", e.speaker_id, e.utt_id);
        e.noisy_path =
            detail::relative_wav_path("noisy", e.speaker_id, e.utt_id);
        e.duration = mixed_clean.duration();
        out.files.emplace_back(e.clean_path, std::move(mixed_clean));
        out.files.emplace_back(*e.noisy_path, std::move(mixed_noisy));
        break;
      }
      default:
        throw Error("materialize: unsupported strategy");
    }
    out.entry = std::move(e);
    built[i] = std::move(out);
  });

  // One peak-normalization factor across everything written in this run, so
  // relative levels (and thus realized SNRs) survive PCM16 export.
  double peak = 0.0;
  for (const auto& b : built)
    for (const auto& [rel, audio] : b.files) peak = std::max(peak, peak_abs(audio));
  const double scale = peak >= 1.0 ? cfg.clip_guard / peak : 1.0;

  for (auto& b : built) {
    if (b.entry.mix) b.entry.mix->peak_scale = scale;
    if (scale != 1.0)
      b.entry.augmentation.params["peak_scale"] = detail::format_param(scale);
    for (auto& [rel, audio] : b.files) {
      if (scale != 1.0)
        for (double& v : audio.samples) v *= scale;
      save_wav(audio, cfg.root / rel);
    }
  }

  Manifest updated;
  std::set<std::string> replaced;
  for (const auto& b : built)
    if (b.replaces_existing) replaced.insert(b.entry.utt_id);
  const bool drop_unplanned_pool = plan.strategy == Strategy::kSynthetic;
  for (const auto& e : manifest.entries) {
    if (replaced.count(e.utt_id)) continue;  // superseded below
    // Ingested-but-unplanned clean entries are a candidate pool, not corpus
    // content; they are left out of the materialized manifest.
    if (drop_unplanned_pool &&
        e.augmentation.strategy == Strategy::kSynthetic && !e.noisy_path)
      continue;
    updated.entries.push_back(e);
  }
  for (auto& b : built) updated.entries.push_back(std::move(b.entry));
  std::sort(updated.entries.begin(), updated.entries.end(),
            [](const ManifestEntry& x, const ManifestEntry& y) {
              return x.utt_id < y.utt_id;
            });
  validate_manifest(updated);
  return updated;
}

}  // namespace seaug
