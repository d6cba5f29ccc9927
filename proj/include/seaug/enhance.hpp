// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"
#include "seaug/stft.hpp"

namespace seaug {

enum class EnhancerMethod { kIdentity, kSpectralSubtraction, kWiener };

inline std::string to_string(EnhancerMethod m) {
  switch (m) {
    case EnhancerMethod::kIdentity: return "identity";
    case EnhancerMethod::kSpectralSubtraction: return "specsub";
    case EnhancerMethod::kWiener: return "wiener";
  }
  throw Error("to_string: bad enhancer method");
}

inline EnhancerMethod enhancer_from_string(const std::string& s) {
  if (s == "identity") return EnhancerMethod::kIdentity;
  if (s == "specsub") return EnhancerMethod::kSpectralSubtraction;
  if (s == "wiener") return EnhancerMethod::kWiener;
  throw UsageError("unknown enhancer method: " + s);
}

struct EnhancerConfig {
  EnhancerMethod method = EnhancerMethod::kWiener;
  int noise_frames = 6;     // leading frames assumed speech-free
  double floor = 0.002;     // minimum gain as a fraction of noisy magnitude
  double smoothing = 0.98;  // decision-directed a-priori SNR memory
  StftConfig stft;          // defaults to the 510/128 signal-model geometry
};

inline void check_enhancer_config(const EnhancerConfig& cfg) {
  if (cfg.noise_frames < 1)
    throw Error("enhancer: noise_frames must be >= 1");
  if (!(cfg.floor >= 0.0 && cfg.floor <= 1.0))
    throw Error("enhancer: floor must lie in [0, 1]");
  if (!(cfg.smoothing >= 0.0 && cfg.smoothing < 1.0))
    throw Error("enhancer: smoothing must lie in [0, 1)");
  check_stft_config(cfg.stft);
}

namespace detail {

// Tracks per-bin spectral minima of a smoothed periodogram over a sliding
// window of `subwindows * subwindow_len` frames, the usual lightweight stand-
// in for full minimum statistics. The bias factor compensates the downward
// bias of taking a minimum.
class MinTracker {
 public:
  MinTracker(int bins, int subwindows, int subwindow_len,
             const std::vector<double>& init)
      : bins_(bins), subwindows_(subwindows), subwindow_len_(subwindow_len),
        current_(init), stored_(static_cast<std::size_t>(subwindows), init) {}

  // Feed one smoothed-power frame; returns the tracked minimum per bin.
  std::vector<double> update(const std::vector<double>& power) {
    for (int k = 0; k < bins_; ++k)
      current_[static_cast<std::size_t>(k)] = std::min(
          current_[static_cast<std::size_t>(k)], power[static_cast<std::size_t>(k)]);
    if (++count_ >= subwindow_len_) {
      stored_.pop_front();
      stored_.push_back(current_);
      current_.assign(static_cast<std::size_t>(bins_),
                      std::numeric_limits<double>::infinity());
      count_ = 0;
    }
    std::vector<double> out(static_cast<std::size_t>(bins_));
    for (int k = 0; k < bins_; ++k) {
      double m = current_[static_cast<std::size_t>(k)];
      for (const auto& s : stored_)
        m = std::min(m, s[static_cast<std::size_t>(k)]);
      out[static_cast<std::size_t>(k)] = m;
    }
    return out;
  }

 private:
  int bins_;
  int subwindows_;
  int subwindow_len_;
  int count_ = 0;
  std::vector<double> current_;
  std::deque<std::vector<double>> stored_;
};

inline std::vector<double> leading_noise_power(const Spectrogram& spec,
                                               int frames) {
  std::vector<double> psd(static_cast<std::size_t>(spec.bins), 0.0);
  const int use = std::min(frames, spec.num_frames());
  for (int l = 0; l < use; ++l)
    for (int k = 0; k < spec.bins; ++k)
      psd[static_cast<std::size_t>(k)] +=
          std::norm(spec.frames[static_cast<std::size_t>(l)]
                              [static_cast<std::size_t>(k)]);
  for (auto& v : psd) v /= use;
  return psd;
}

inline AudioBuffer enhance_spectral_subtraction(const AudioBuffer& noisy,
                                                const EnhancerConfig& cfg) {
  Spectrogram y = stft(noisy, cfg.stft);
  const std::vector<double> noise_psd =
      leading_noise_power(y, cfg.noise_frames);
  for (auto& frame : y.frames)
    for (int k = 0; k < y.bins; ++k) {
      auto& v = frame[static_cast<std::size_t>(k)];
      const double mag = std::abs(v);
      const double sub = mag * mag - noise_psd[static_cast<std::size_t>(k)];
      const double floor_mag = cfg.floor * mag;
      const double out_mag =
          std::max(sub > 0.0 ? std::sqrt(sub) : 0.0, floor_mag);
      v = mag > 0.0 ? std::polar(out_mag, std::arg(v))
                    : std::complex<double>(0.0, 0.0);
    }
  return istft(y);
}

inline AudioBuffer enhance_wiener(const AudioBuffer& noisy,
                                  const EnhancerConfig& cfg) {
  // Tracking constants: periodogram smoothing, minimum-search geometry and
  // its bias compensation.
  constexpr double kSmooth = 0.85;
  constexpr int kSubwindows = 8;
  constexpr int kSubwindowLen = 12;
  constexpr double kMinBias = 1.5;
  constexpr double kTinyPsd = 1e-12;

  Spectrogram y = stft(noisy, cfg.stft);
  const int bins = y.bins;
  std::vector<double> init = leading_noise_power(y, cfg.noise_frames);
  for (auto& v : init) v = std::max(v, kTinyPsd);
  MinTracker tracker(bins, kSubwindows, kSubwindowLen, init);

  std::vector<double> smoothed = init;
  std::vector<double> prev_clean_power(static_cast<std::size_t>(bins), 0.0);
  bool first = true;
  for (auto& frame : y.frames) {
    std::vector<double> power(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k)
      power[static_cast<std::size_t>(k)] =
          std::norm(frame[static_cast<std::size_t>(k)]);
    for (int k = 0; k < bins; ++k)
      smoothed[static_cast<std::size_t>(k)] =
          kSmooth * smoothed[static_cast<std::size_t>(k)] +
          (1.0 - kSmooth) * power[static_cast<std::size_t>(k)];
    std::vector<double> floor_psd = tracker.update(smoothed);

    for (int k = 0; k < bins; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      const double noise = std::max(kMinBias * floor_psd[ks], kTinyPsd);
      const double gamma = power[ks] / noise;
      const double ml = std::max(gamma - 1.0, 0.0);
      const double xi = first
                            ? cfg.smoothing + (1.0 - cfg.smoothing) * ml
                            : cfg.smoothing * prev_clean_power[ks] / noise +
                                  (1.0 - cfg.smoothing) * ml;
      const double gain = std::max(xi / (1.0 + xi), cfg.floor);
      auto& v = frame[ks];
      v *= gain;
      prev_clean_power[ks] = std::norm(v);
    }
    first = false;
  }
  return istft(y);
}

}  // namespace detail

// Single-channel enhancement; output always has the input's length and rate.
inline AudioBuffer enhance(const AudioBuffer& noisy,
                           const EnhancerConfig& cfg) {
  check_audio(noisy, "enhance");
  check_enhancer_config(cfg);
  if (cfg.method == EnhancerMethod::kIdentity) return noisy;
  const std::int64_t needed =
      static_cast<std::int64_t>(cfg.noise_frames - 1) * cfg.stft.hop + 1;
  if (static_cast<std::int64_t>(noisy.size()) < needed)
    throw Error("enhance: audio shorter than the noise-estimation window");
  AudioBuffer out = cfg.method == EnhancerMethod::kWiener
                        ? detail::enhance_wiener(noisy, cfg)
                        : detail::enhance_spectral_subtraction(noisy, cfg);
  for (double v : out.samples)
    if (!std::isfinite(v)) throw Error("enhance: non-finite output sample");
  return out;
}

}  // namespace seaug
