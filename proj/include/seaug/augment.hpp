// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"
#include "seaug/resample.hpp"
#include "seaug/rng.hpp"
#include "seaug/stft.hpp"
#include "seaug/strategy.hpp"

namespace seaug {

struct PitchShiftSpec {
  double semitones = 0.0;
};

struct TimeStretchSpec {
  double ratio = 1.0;  // > 1 shortens the output (output length ~ len / ratio)
};

inline void check_pitch_shift_spec(const PitchShiftSpec& spec) {
  if (!std::isfinite(spec.semitones) || std::fabs(spec.semitones) > 24.0)
    throw Error("pitch_shift: semitones must be finite and within +/-24");
}

inline void check_time_stretch_spec(const TimeStretchSpec& spec) {
  if (!(spec.ratio >= 0.25 && spec.ratio <= 4.0))
    throw Error("time_stretch: ratio must lie in [0.25, 4]");
}

// Fixed variant parameter sets applied to every clean utterance.
inline constexpr std::array<double, 4> kPitchShiftSemitones = {-2.5, -1.5, 1.5,
                                                               2.5};
inline constexpr std::array<double, 4> kTimeStretchRates = {0.81, 0.93, 1.07,
                                                            1.23};
inline constexpr std::array<double, 3> kSpecMixBaseGammas = {0.1, 0.3, 0.5};
inline constexpr int kVariantsPerUtterance = 4;

// Analysis geometry used by the phase vocoder (independent of the signal
// model's 510/128 front end; a power-of-two window with 75% overlap keeps
// phase propagation well-conditioned).
inline StftConfig phase_vocoder_config() {
  StftConfig cfg;
  cfg.win_len = 1024;
  cfg.hop = 256;
  cfg.window = WindowKind::kHann;
  cfg.center = true;
  return cfg;
}

namespace detail {

// Resamples the spectrogram's time axis by `rate` (> 1 plays faster),
// interpolating magnitudes linearly and propagating phase so each bin
// advances by its expected increment plus the measured deviation.
inline Spectrogram phase_vocoder(const Spectrogram& d, double rate) {
  const int bins = d.bins;
  const int hop = d.config.hop;
  const int win = d.config.win_len;
  const double pi = 3.14159265358979323846;
  const std::int64_t in_frames = d.num_frames();

  std::vector<double> advance(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k)
    advance[static_cast<std::size_t>(k)] = 2.0 * pi * hop * k / win;

  // Two zero frames of lookahead let the last interpolation read past the end.
  auto column = [&](std::int64_t idx,
                    int k) -> std::complex<double> {
    if (idx >= in_frames) return {0.0, 0.0};
    return d.frames[static_cast<std::size_t>(idx)][static_cast<std::size_t>(k)];
  };

  std::vector<double> phase_acc(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k)
    phase_acc[static_cast<std::size_t>(k)] = std::arg(column(0, k));

  Spectrogram out;
  out.bins = bins;
  out.config = d.config;
  out.sample_rate = d.sample_rate;
  for (double t = 0.0; t < static_cast<double>(in_frames); t += rate) {
    const auto base = static_cast<std::int64_t>(t);
    const double frac = t - static_cast<double>(base);
    std::vector<std::complex<double>> frame(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
      const std::complex<double> c0 = column(base, k);
      const std::complex<double> c1 = column(base + 1, k);
      const double mag = (1.0 - frac) * std::abs(c0) + frac * std::abs(c1);
      frame[static_cast<std::size_t>(k)] =
          std::polar(mag, phase_acc[static_cast<std::size_t>(k)]);
      double dphase =
          std::arg(c1) - std::arg(c0) - advance[static_cast<std::size_t>(k)];
      dphase -= 2.0 * pi * std::round(dphase / (2.0 * pi));
      phase_acc[static_cast<std::size_t>(k)] +=
          advance[static_cast<std::size_t>(k)] + dphase;
    }
    out.frames.push_back(std::move(frame));
  }
  out.original_len = static_cast<std::int64_t>(out.frames.size()) * hop;
  return out;
}

}  // namespace detail

// Changes the speech rate by `spec.ratio` without moving the pitch: the
// output holds the same tonal content over round(len / ratio) samples.
inline AudioBuffer time_stretch(const AudioBuffer& audio,
                                const TimeStretchSpec& spec) {
  check_audio(audio, "time_stretch");
  check_time_stretch_spec(spec);
  const StftConfig cfg = phase_vocoder_config();
  if (static_cast<int>(audio.size()) < cfg.win_len)
    throw Error("time_stretch: audio shorter than one analysis window");
  if (spec.ratio == 1.0) return audio;

  const Spectrogram d = stft(audio, cfg);
  Spectrogram stretched = detail::phase_vocoder(d, spec.ratio);
  const std::int64_t out_len =
      std::llround(static_cast<double>(audio.size()) / spec.ratio);
  return istft(stretched, std::max<std::int64_t>(1, out_len));
}

// Moves pitch by `spec.semitones` while keeping the duration: stretch time by
// 2^(s/12), then resample by the same factor back to the original extent, so
// every frequency lands at 2^(s/12) times its input position.
inline AudioBuffer pitch_shift(const AudioBuffer& audio,
                               const PitchShiftSpec& spec) {
  check_audio(audio, "pitch_shift");
  check_pitch_shift_spec(spec);
  const StftConfig cfg = phase_vocoder_config();
  if (static_cast<int>(audio.size()) < cfg.win_len)
    throw Error("pitch_shift: audio shorter than one analysis window");
  if (spec.semitones == 0.0) return audio;

  const double rate = std::pow(2.0, -spec.semitones / 12.0);
  const AudioBuffer stretched = time_stretch(audio, TimeStretchSpec{rate});
  std::vector<double> shifted = resample_ratio(stretched.samples, rate);
  shifted.resize(audio.size(), 0.0);  // trim or zero-pad to the input extent
  return AudioBuffer(std::move(shifted), audio.sample_rate);
}

// The four standard variants of one clean utterance for a given strategy.
inline std::vector<AudioBuffer> make_variants(const AudioBuffer& audio,
                                              Strategy strategy) {
  std::vector<AudioBuffer> out;
  out.reserve(kVariantsPerUtterance);
  switch (strategy) {
    case Strategy::kPitchShift:
      for (double s : kPitchShiftSemitones)
        out.push_back(pitch_shift(audio, PitchShiftSpec{s}));
      break;
    case Strategy::kTimeStretch:
      for (double r : kTimeStretchRates)
        out.push_back(time_stretch(audio, TimeStretchSpec{r}));
      break;
    default:
      throw Error("make_variants: strategy has no fixed variant set");
  }
  return out;
}

// Per-utterance width parameters: the three fixed values plus one fresh
// uniform draw from [0, 1].
inline std::array<double, 4> specmix_gammas(Rng& rng) {
  return {kSpecMixBaseGammas[0], kSpecMixBaseGammas[1], kSpecMixBaseGammas[2],
          rng.uniform()};
}

}  // namespace seaug
