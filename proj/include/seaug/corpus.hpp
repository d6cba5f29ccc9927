// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seaug/error.hpp"
#include "seaug/folds.hpp"
#include "seaug/manifest.hpp"
#include "seaug/noise.hpp"
#include "seaug/parallel.hpp"
#include "seaug/resample.hpp"
#include "seaug/rng.hpp"
#include "seaug/strategy.hpp"
#include "seaug/wav.hpp"

namespace seaug {

// speakers.csv: header `speaker_id,group`, one row per speaker.
inline std::vector<SpeakerInfo> load_speaker_table(
    const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw Error("cannot open speaker table: " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty speaker table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "speaker_id,group")
    throw Error("speaker table must start with header speaker_id,group");
  std::vector<SpeakerInfo> speakers;
  std::set<std::string> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, group;
    if (!std::getline(ss, id, ',') || !std::getline(ss, group))
      throw Error("malformed speaker row at line " + std::to_string(lineno));
    if (!seen.insert(id).second)
      throw Error("duplicate speaker " + id + " in table");
    speakers.push_back(SpeakerInfo{id, group_from_string(group)});
  }
  if (speakers.empty()) throw Error("speaker table lists no speakers");
  return speakers;
}

inline std::vector<SpeakerInfo> speakers_of(const Manifest& manifest) {
  std::map<std::string, Group> groups;
  for (const auto& e : manifest.entries) groups[e.speaker_id] = e.group;
  std::vector<SpeakerInfo> out;
  for (const auto& [id, g] : groups) out.push_back(SpeakerInfo{id, g});
  return out;
}

// Reads a raw corpus (speakers.csv + clean/{speaker}/*.wav at any rate),
// writes everything under out_root at target_rate, and returns the initial
// manifest with paths relative to out_root.
inline Manifest resample_corpus(const std::filesystem::path& in_root,
                                const std::filesystem::path& out_root,
                                int target_rate, int jobs = 1) {
  if (target_rate <= 0) throw UsageError("target rate must be positive");
  const std::vector<SpeakerInfo> speakers =
      load_speaker_table(in_root / "speakers.csv");
  std::map<std::string, Group> group_of;
  for (const auto& s : speakers) group_of[s.speaker_id] = s.group;

  const std::filesystem::path clean_root = in_root / "clean";
  if (!std::filesystem::is_directory(clean_root))
    throw Error("corpus has no clean/ directory: " + clean_root.string());

  struct Job {
    std::string speaker;
    std::filesystem::path src;
    std::string rel_out;
    std::string utt_id;
  };
  std::vector<Job> jobs_list;
  for (const auto& dir : std::filesystem::directory_iterator(clean_root)) {
    if (!dir.is_directory()) continue;
    const std::string speaker = dir.path().filename().string();
    if (group_of.find(speaker) == group_of.end())
      throw Error("clean/ contains speaker " + speaker +
                  " missing from speakers.csv");
    std::vector<std::filesystem::path> files;
    for (const auto& f : std::filesystem::directory_iterator(dir.path()))
      if (f.is_regular_file() && f.path().extension() == ".wav")
        files.push_back(f.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string utt_id = speaker + "_" + f.stem().string();
      jobs_list.push_back(Job{speaker, f,
                              "clean/" + speaker + "/" + utt_id + ".wav",
                              utt_id});
    }
  }
  if (jobs_list.empty()) throw Error("corpus has no clean wav files");
  std::sort(jobs_list.begin(), jobs_list.end(),
            [](const Job& a, const Job& b) { return a.utt_id < b.utt_id; });

  std::vector<ManifestEntry> entries(jobs_list.size());
  parallel_for(jobs_list.size(), jobs, [&](std::size_t i) {
    const Job& job = jobs_list[i];
    const AudioBuffer resampled = resample(load_wav(job.src), target_rate);
    save_wav(resampled, out_root / job.rel_out);
    ManifestEntry e;
    e.utt_id = job.utt_id;
    e.speaker_id = job.speaker;
    e.group = group_of.at(job.speaker);
    e.clean_path = job.rel_out;
    e.duration = resampled.duration();
    entries[i] = std::move(e);
  });

  Manifest manifest;
  manifest.entries = std::move(entries);
  validate_manifest(manifest);
  return manifest;
}

// Brings externally generated per-speaker recordings into the corpus: files
// under dir/{speaker_id}/*.wav are resampled to target_rate, written beside
// the originals, and returned as clean-only entries whose provenance records
// the generator and the speaker's reference utterance.
inline std::vector<ManifestEntry> ingest_synthetic(
    const std::filesystem::path& dir, const std::string& generator_name,
    const Manifest& manifest, const std::filesystem::path& root,
    int target_rate, int jobs = 1) {
  if (generator_name.empty()) throw UsageError("generator name is empty");
  if (!std::filesystem::is_directory(dir))
    throw Error("synthetic ingestion dir missing: " + dir.string());

  // Group/reference lookup per speaker; the reference is the first original
  // utterance in id order (the prompt a voice generator would clone from).
  std::map<std::string, Group> group_of;
  std::map<std::string, std::string> reference_of;
  for (const auto& e : manifest.entries) {
    if (e.augmentation.strategy != Strategy::kNone) continue;
    group_of[e.speaker_id] = e.group;
    auto it = reference_of.find(e.speaker_id);
    if (it == reference_of.end() || e.utt_id < it->second)
      reference_of[e.speaker_id] = e.utt_id;
  }

  struct Job {
    std::string speaker;
    std::filesystem::path src;
    std::string rel_out;
    std::string utt_id;
  };
  std::vector<Job> jobs_list;
  for (const auto& d : std::filesystem::directory_iterator(dir)) {
    if (!d.is_directory()) continue;
    const std::string speaker = d.path().filename().string();
    if (group_of.find(speaker) == group_of.end())
      throw Error("synthetic dir names unknown speaker: " + speaker);
    std::vector<std::filesystem::path> files;
    for (const auto& f : std::filesystem::directory_iterator(d.path()))
      if (f.is_regular_file() && f.path().extension() == ".wav")
        files.push_back(f.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string utt_id =
          speaker + "_" + generator_name + "_" + f.stem().string();
      jobs_list.push_back(Job{speaker, f,
                              "clean/" + speaker + "/" + utt_id + ".wav",
                              utt_id});
    }
  }
  std::sort(jobs_list.begin(), jobs_list.end(),
            [](const Job& a, const Job& b) { return a.utt_id < b.utt_id; });

  std::vector<ManifestEntry> entries(jobs_list.size());
  parallel_for(jobs_list.size(), jobs, [&](std::size_t i) {
    const Job& job = jobs_list[i];
    const AudioBuffer resampled = resample(load_wav(job.src), target_rate);
    save_wav(resampled, root / job.rel_out);
    ManifestEntry e;
    e.utt_id = job.utt_id;
    e.speaker_id = job.speaker;
    e.group = group_of.at(job.speaker);
    e.clean_path = job.rel_out;
    e.duration = resampled.duration();
    e.augmentation.strategy = Strategy::kSynthetic;
    e.augmentation.params["generator"] = generator_name;
    e.augmentation.parent_utt_ids = {reference_of.at(job.speaker)};
    entries[i] = std::move(e);
  });
  return entries;
}

// Mixes fresh noise onto every entry that has no mixture yet, at an SNR and
// noise selection drawn from a per-utterance stream of the master seed.
inline Manifest mix_corpus(const Manifest& manifest,
                           const std::filesystem::path& root,
                           const NoiseCorpus& noise, std::uint64_t master_seed,
                           int jobs = 1, double clip_guard = 0.99) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    if (!manifest.entries[i].noisy_path) todo.push_back(i);

  Manifest updated = manifest;
  std::vector<AudioBuffer> staged(todo.size());
  parallel_for(todo.size(), jobs, [&](std::size_t t) {
    ManifestEntry& e = updated.entries[todo[t]];
    const AudioBuffer clean = load_wav(root / e.clean_path);
    Rng rng(derive_seed(master_seed, "mix:" + e.utt_id));
    MixOutcome mix =
        mix_at_snr(clean, noise, sample_mix_spec(rng, noise.types()));
    e.noisy_path = "noisy/" + e.speaker_id + "/" + e.utt_id + ".wav";
    e.mix = MixRecord{mix.spec.noise_type, mix.spec.snr_db,
                      mix.spec.noise_offset, mix.spec.seed,
                      mix.gain,          mix.noise_file,
                      1.0};
    staged[t] = std::move(mix.noisy);
  });

  double peak = 0.0;
  for (const auto& a : staged) peak = std::max(peak, peak_abs(a));
  const double scale = peak >= 1.0 ? clip_guard / peak : 1.0;
  for (std::size_t t = 0; t < todo.size(); ++t) {
    ManifestEntry& e = updated.entries[todo[t]];
    e.mix->peak_scale = scale;
    if (scale != 1.0)
      for (double& v : staged[t].samples) v *= scale;
    save_wav(staged[t], root / *e.noisy_path);
  }
  validate_manifest(updated);
  return updated;
}

}  // namespace seaug
