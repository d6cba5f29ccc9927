// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seaug/error.hpp"
#include "seaug/rng.hpp"
#include "seaug/stft.hpp"

namespace seaug {

inline constexpr int kMaxMaskBands = 3;

// Parameters for time-frequency exchange between two utterances: gamma caps
// each band's width as a fraction of the grid dimension.
struct SpecMixSpec {
  double gamma = 0.0;
  int max_freq_bands = kMaxMaskBands;
  int max_time_bands = kMaxMaskBands;
  std::uint64_t seed = 0;
};

inline void check_specmix_spec(const SpecMixSpec& spec) {
  if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0))
    throw Error("specmix: gamma must lie in [0, 1]");
  if (spec.max_freq_bands < 1 || spec.max_freq_bands > kMaxMaskBands ||
      spec.max_time_bands < 1 || spec.max_time_bands > kMaxMaskBands)
    throw Error("specmix: band maxima must lie in [1, 3]");
}

// Half-open index interval [start, start + width).
struct Band {
  int start = 0;
  int width = 0;
};

// Union of full-width frequency bands and full-height time bands over a
// (freq, time) grid. Bands may be empty (width 0) or overlap each other.
struct TfMask {
  int freq_dim = 0;
  int time_dim = 0;
  std::vector<Band> freq_bands;
  std::vector<Band> time_bands;

  bool at(int k, int l) const {
    for (const Band& b : freq_bands)
      if (k >= b.start && k < b.start + b.width) return true;
    for (const Band& b : time_bands)
      if (l >= b.start && l < b.start + b.width) return true;
    return false;
  }

  // Fraction of grid cells covered by the union.
  double coverage() const {
    if (freq_dim <= 0 || time_dim <= 0) return 0.0;
    std::vector<char> f(static_cast<std::size_t>(freq_dim), 0);
    std::vector<char> t(static_cast<std::size_t>(time_dim), 0);
    for (const Band& b : freq_bands)
      for (int i = b.start; i < b.start + b.width; ++i)
        f[static_cast<std::size_t>(i)] = 1;
    for (const Band& b : time_bands)
      for (int i = b.start; i < b.start + b.width; ++i)
        t[static_cast<std::size_t>(i)] = 1;
    const auto nf = static_cast<double>(std::count(f.begin(), f.end(), 1));
    const auto nt = static_cast<double>(std::count(t.begin(), t.end(), 1));
    const double covered = nf * time_dim + nt * freq_dim - nf * nt;
    return covered / (static_cast<double>(freq_dim) * time_dim);
  }
};

namespace detail {

inline std::vector<Band> sample_bands(int dim, double gamma, int max_bands,
                                      Rng& rng) {
  const int count = 1 + static_cast<int>(rng.below(
                            static_cast<std::uint64_t>(max_bands)));
  const int max_width = std::min(
      dim, static_cast<int>(std::floor(gamma * static_cast<double>(dim))));
  std::vector<Band> bands;
  bands.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Band b;
    b.width = static_cast<int>(
        rng.below(static_cast<std::uint64_t>(max_width) + 1));
    b.start = static_cast<int>(
        rng.below(static_cast<std::uint64_t>(dim - b.width) + 1));
    bands.push_back(b);
  }
  return bands;
}

}  // namespace detail

// Draws 1..max frequency bands and 1..max time bands; each band width is
// uniform on {0, ..., floor(gamma * dim)} and each start is uniform over the
// placements that keep the band in range.
inline TfMask sample_tf_mask(int freq_dim, int time_dim,
                             const SpecMixSpec& spec, Rng& rng) {
  if (freq_dim <= 0 || time_dim <= 0)
    throw Error("sample_tf_mask: grid dimensions must be positive");
  check_specmix_spec(spec);
  TfMask mask;
  mask.freq_dim = freq_dim;
  mask.time_dim = time_dim;
  mask.freq_bands =
      detail::sample_bands(freq_dim, spec.gamma, spec.max_freq_bands, rng);
  mask.time_bands =
      detail::sample_bands(time_dim, spec.gamma, spec.max_time_bands, rng);
  return mask;
}

// Appends zero frames so a pair of different-length spectrograms can share
// one mask grid. The recorded original length is stretched to match.
inline Spectrogram pad_time(const Spectrogram& spec, int num_frames,
                            std::int64_t original_len) {
  if (num_frames < spec.num_frames())
    throw Error("pad_time: target shorter than spectrogram");
  Spectrogram out = spec;
  out.frames.resize(static_cast<std::size_t>(num_frames),
                    std::vector<std::complex<double>>(
                        static_cast<std::size_t>(spec.bins), {0.0, 0.0}));
  out.original_len = std::max(out.original_len, original_len);
  return out;
}

// A clean utterance and its noisy counterpart, transformed together.
struct SpectrogramPair {
  Spectrogram clean;
  Spectrogram noisy;
};

namespace detail {

// Exact elementwise selection: `a` outside the mask, `b` inside it.
inline Spectrogram mix_one(const Spectrogram& a, const Spectrogram& b,
                           const TfMask& mask) {
  if (a.bins != b.bins || a.num_frames() != b.num_frames())
    throw Error("spec_mix: spectrogram shapes differ");
  if (mask.freq_dim != a.bins || mask.time_dim != a.num_frames())
    throw Error("spec_mix: mask does not match spectrogram shape");
  Spectrogram out = a;
  for (int l = 0; l < a.num_frames(); ++l)
    for (int k = 0; k < a.bins; ++k)
      if (mask.at(k, l))
        out.frames[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
            b.frames[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
  return out;
}

}  // namespace detail

// Exchanges the masked time-frequency cells of pair B into pair A, applying
// the SAME mask to the clean member and the noisy member so the clean/noisy
// alignment survives. Shorter members are zero-padded in time to the longest
// first; differing frequency dimensions cannot be reconciled and throw.
inline SpectrogramPair spec_mix(const SpectrogramPair& a,
                                const SpectrogramPair& b, const TfMask& mask) {
  const Spectrogram* all[4] = {&a.clean, &a.noisy, &b.clean, &b.noisy};
  for (const Spectrogram* s : all) {
    if (s->bins != a.clean.bins)
      throw Error("spec_mix: frequency dimensions differ");
    if (s->sample_rate != a.clean.sample_rate)
      throw Error("spec_mix: sample rates differ");
  }
  int frames = 0;
  std::int64_t longest = 0;
  for (const Spectrogram* s : all) {
    frames = std::max(frames, s->num_frames());
    longest = std::max(longest, s->original_len);
  }
  if (mask.freq_dim != a.clean.bins || mask.time_dim != frames)
    throw Error("spec_mix: mask does not match padded geometry");
  SpectrogramPair out;
  out.clean = detail::mix_one(pad_time(a.clean, frames, longest),
                              pad_time(b.clean, frames, longest), mask);
  out.noisy = detail::mix_one(pad_time(a.noisy, frames, longest),
                              pad_time(b.noisy, frames, longest), mask);
  return out;
}

}  // namespace seaug
