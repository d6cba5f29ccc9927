// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"
#include "seaug/rng.hpp"
#include "seaug/wav.hpp"

namespace seaug {

inline const std::vector<std::string>& default_noise_types() {
  static const std::vector<std::string> types = {"BUS", "CAF", "PED", "STR"};
  return types;
}

// SNR sampling protocol for mixtures.
inline constexpr double kSnrLowDb = -6.0;
inline constexpr double kSnrHighDb = 14.0;
inline constexpr int kMixRetryLimit = 8;

// An indexed directory tree of typed noise recordings: one subdirectory per
// type, WAV files inside, all at one sample rate. Read-only after load.
class NoiseCorpus {
 public:
  struct Entry {
    std::filesystem::path path;
    std::uint64_t frames = 0;
  };

  static NoiseCorpus load(const std::filesystem::path& root,
                          const std::vector<std::string>& required_types =
                              default_noise_types()) {
    if (!std::filesystem::is_directory(root))
      throw Error("noise corpus root is not a directory: " + root.string());
    NoiseCorpus corpus;
    for (const std::string& type : required_types) {
      const std::filesystem::path dir = root / type;
      if (!std::filesystem::is_directory(dir))
        throw Error("noise corpus lacks a '" + type +
                    "' directory under " + root.string());
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".wav")
          files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty())
        throw Error("noise type '" + type + "' has no wav files");
      for (const auto& f : files) {
        const WavInfo info = wav_info(f);
        if (corpus.sample_rate_ == 0) corpus.sample_rate_ = info.sample_rate;
        if (info.sample_rate != corpus.sample_rate_)
          throw Error("noise corpus mixes sample rates: " + f.string());
        corpus.entries_[type].push_back(Entry{f, info.frames});
      }
      corpus.types_.push_back(type);
    }
    return corpus;
  }

  int sample_rate() const { return sample_rate_; }
  const std::vector<std::string>& types() const { return types_; }

  const std::vector<Entry>& entries(const std::string& type) const {
    auto it = entries_.find(type);
    if (it == entries_.end())
      throw Error("noise corpus has no type '" + type + "'");
    return it->second;
  }

 private:
  int sample_rate_ = 0;
  std::vector<std::string> types_;  // sorted order of required_types as given
  std::map<std::string, std::vector<Entry>> entries_;
};

// Everything needed to reproduce one mixture: the noise source, the target
// level, where to start reading, and the seed that resolves the remaining
// choices (file within type, retry offsets).
struct MixSpec {
  std::string noise_type;
  double snr_db = 0.0;
  std::uint64_t noise_offset = 0;
  std::uint64_t seed = 0;
};

inline void check_mix_spec(const MixSpec& spec) {
  if (spec.noise_type.empty()) throw Error("mix: empty noise type");
  if (!std::isfinite(spec.snr_db)) throw Error("mix: SNR must be finite");
}

// Gain g so that 20*log10(rms(clean) / rms(g*noise)) equals snr_db exactly.
inline double scale_for_snr(const AudioBuffer& clean, const AudioBuffer& noise,
                            double snr_db) {
  check_audio(clean, "scale_for_snr(clean)");
  check_audio(noise, "scale_for_snr(noise)");
  if (!std::isfinite(snr_db)) throw Error("scale_for_snr: SNR must be finite");
  const double clean_rms = rms(clean);
  const double noise_rms = rms(noise);
  if (clean_rms <= 0.0) throw Error("scale_for_snr: silent clean signal");
  if (noise_rms <= 0.0) throw Error("scale_for_snr: silent noise signal");
  return clean_rms / noise_rms * std::pow(10.0, -snr_db / 20.0);
}

struct MixOutcome {
  AudioBuffer noisy;
  MixSpec spec;          // offset updated to the one actually used
  double gain = 0.0;
  std::string noise_file;  // chosen source, for audit records
};

namespace detail {

inline std::vector<double> noise_segment(const std::vector<double>& noise,
                                         std::uint64_t offset,
                                         std::size_t len) {
  std::vector<double> seg(len);
  const std::uint64_t n = noise.size();
  for (std::size_t i = 0; i < len; ++i)
    seg[i] = noise[static_cast<std::size_t>((offset + i) % n)];
  return seg;
}

}  // namespace detail

// Builds noisy = clean + g * segment, cropping the chosen noise file at the
// requested offset (wrapping around if the file is shorter than the speech).
// Silent segments trigger a bounded number of re-drawn offsets.
inline MixOutcome mix_at_snr(const AudioBuffer& clean,
                             const NoiseCorpus& corpus, const MixSpec& spec) {
  check_audio(clean, "mix_at_snr");
  check_mix_spec(spec);
  if (clean.sample_rate != corpus.sample_rate())
    throw Error("mix_at_snr: clean rate differs from noise corpus rate");

  const auto& files = corpus.entries(spec.noise_type);
  Rng rng(spec.seed);
  const auto& entry = files[static_cast<std::size_t>(
      rng.below(static_cast<std::uint64_t>(files.size())))];
  const AudioBuffer noise = load_wav(entry.path);

  std::uint64_t offset = spec.noise_offset % noise.size();
  for (int attempt = 0;; ++attempt) {
    AudioBuffer segment(
        detail::noise_segment(noise.samples, offset, clean.size()),
        clean.sample_rate);
    if (rms(segment) > 1e-12) {
      const double gain = scale_for_snr(clean, segment, spec.snr_db);
      AudioBuffer noisy = clean;
      for (std::size_t i = 0; i < noisy.size(); ++i)
        noisy.samples[i] += gain * segment.samples[i];
      MixSpec used = spec;
      used.noise_offset = offset;
      return MixOutcome{std::move(noisy), used, gain,
                        entry.path.filename().string()};
    }
    if (attempt >= kMixRetryLimit)
      throw Error("mix_at_snr: could not find a non-silent segment in " +
                  entry.path.string());
    offset = rng.below(noise.size());
  }
}

// Draws (type, SNR, offset, seed) for one mixture: type uniform over the
// corpus types, SNR uniform on [-6, 14] dB, offset uniform over a wide range
// (interpreted modulo the chosen file's length).
inline MixSpec sample_mix_spec(Rng& rng,
                               const std::vector<std::string>& types =
                                   default_noise_types()) {
  if (types.empty()) throw Error("sample_mix_spec: no noise types");
  MixSpec spec;
  spec.noise_type =
      types[static_cast<std::size_t>(rng.below(types.size()))];
  spec.snr_db = rng.uniform(kSnrLowDb, kSnrHighDb);
  spec.noise_offset = rng.below(std::uint64_t{1} << 31);
  spec.seed = rng.next_u64();
  return spec;
}

// `count` independent mixtures of the same clean signal, each with a freshly
// sampled MixSpec; the clean samples are shared untouched across pairs.
inline std::vector<MixOutcome> noise_augment(const AudioBuffer& clean,
                                             const NoiseCorpus& corpus,
                                             int count, Rng& rng) {
  if (count < 1) throw Error("noise_augment: count must be >= 1");
  std::vector<MixOutcome> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out.push_back(mix_at_snr(clean, corpus, sample_mix_spec(rng, corpus.types())));
  return out;
}

}  // namespace seaug
