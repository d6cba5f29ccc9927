// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "seaug/error.hpp"

namespace seaug {

// Mono waveform, linear amplitude, double precision throughout the pipeline.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  AudioBuffer() = default;
  AudioBuffer(std::vector<double> s, int rate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

inline void check_audio(const AudioBuffer& a, const char* what) {
  if (a.sample_rate <= 0)
    throw Error(std::string(what) + ": sample rate must be positive");
  if (a.samples.empty())
    throw Error(std::string(what) + ": empty audio");
  for (double v : a.samples)
    if (!std::isfinite(v))
      throw Error(std::string(what) + ": non-finite sample");
}

inline double rms(const AudioBuffer& a) {
  if (a.samples.empty()) throw Error("rms: empty audio");
  double acc = 0.0;
  for (double v : a.samples) acc += v * v;
  return std::sqrt(acc / static_cast<double>(a.samples.size()));
}

inline double peak_abs(const AudioBuffer& a) {
  double p = 0.0;
  for (double v : a.samples) p = std::max(p, std::fabs(v));
  return p;
}

// RMS over frames whose energy is within 40 dB of the loudest frame.
// Optional level meter for SNR scaling; plain rms() is the default.
inline double active_rms(const AudioBuffer& a) {
  check_audio(a, "active_rms");
  const std::size_t frame = static_cast<std::size_t>(
      std::lround(0.032 * a.sample_rate));
  const std::size_t hop = frame / 2;
  if (a.size() < frame || frame == 0 || hop == 0) return rms(a);

  std::vector<double> energies;
  for (std::size_t s = 0; s + frame <= a.size(); s += hop) {
    double e = 0.0;
    for (std::size_t i = 0; i < frame; ++i)
      e += a.samples[s + i] * a.samples[s + i];
    energies.push_back(e);
  }
  double peak = 0.0;
  for (double e : energies) peak = std::max(peak, e);
  if (peak <= 0.0) return 0.0;

  const double thresh = peak * 1e-4;  // -40 dB
  double acc = 0.0;
  std::size_t n = 0;
  for (double e : energies) {
    if (e > thresh) {
      acc += e;
      n += frame;
    }
  }
  return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
}

}  // namespace seaug
