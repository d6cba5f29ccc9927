// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"
#include "seaug/fft.hpp"

namespace seaug {

enum class WindowKind { kSqrtHann, kHann, kRect };

struct StftConfig {
  int win_len = 510;
  int hop = 128;
  WindowKind window = WindowKind::kSqrtHann;
  bool center = true;  // reflect-pad by win_len/2 so frame l is centered at l*hop

  int bins() const { return win_len / 2 + 1; }
};

// Frames of one-sided complex spectra; frames[l][k] is bin k of frame l.
// The analysis geometry and source length ride along so that synthesis can
// restore the exact original extent.
struct Spectrogram {
  int bins = 0;
  StftConfig config;
  int sample_rate = 0;
  std::int64_t original_len = 0;
  std::vector<std::vector<std::complex<double>>> frames;

  int num_frames() const { return static_cast<int>(frames.size()); }
};

inline void check_stft_config(const StftConfig& cfg) {
  if (cfg.win_len <= 0) throw Error("stft: window length must be positive");
  if (cfg.hop <= 0 || cfg.hop > cfg.win_len)
    throw Error("stft: hop must be in (0, win_len]");
}

// Periodic (DFT-even) windows, so overlap-add sums stay flat.
inline std::vector<double> make_window(WindowKind kind, int n) {
  if (n <= 0) throw Error("make_window: length must be positive");
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (kind == WindowKind::kRect) return w;
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * pi * i / n);
    w[static_cast<std::size_t>(i)] =
        kind == WindowKind::kHann ? hann : std::sqrt(hann);
  }
  return w;
}

namespace detail {

// Mirror an out-of-range index back into [0, n) without repeating the edge
// sample, folding as many times as needed for very short signals.
inline std::size_t reflect_index(std::int64_t i, std::int64_t n) {
  if (n == 1) return 0;
  const std::int64_t period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  if (i >= n) i = period - i;
  return static_cast<std::size_t>(i);
}

inline Spectrogram stft_samples(const std::vector<double>& x, int sample_rate,
                                const StftConfig& cfg) {
  check_stft_config(cfg);
  if (x.empty()) throw Error("stft: empty input");

  const auto len = static_cast<std::int64_t>(x.size());
  const std::int64_t pad = cfg.center ? cfg.win_len / 2 : 0;
  std::int64_t num_frames;
  if (cfg.center) {
    num_frames = (len + cfg.hop - 1) / cfg.hop;
  } else {
    if (len < cfg.win_len) throw Error("stft: input shorter than window");
    num_frames = 1 + (len - cfg.win_len) / cfg.hop;
  }

  const std::vector<double> window = make_window(cfg.window, cfg.win_len);
  RealFft fft(cfg.win_len);

  Spectrogram spec;
  spec.bins = cfg.bins();
  spec.config = cfg;
  spec.sample_rate = sample_rate;
  spec.original_len = len;
  spec.frames.resize(static_cast<std::size_t>(num_frames));
  std::vector<double> frame(static_cast<std::size_t>(cfg.win_len));
  for (std::int64_t l = 0; l < num_frames; ++l) {
    const std::int64_t start = l * cfg.hop - pad;
    for (int i = 0; i < cfg.win_len; ++i) {
      const std::int64_t j = start + i;
      const double v = (j >= 0 && j < len)
                           ? x[static_cast<std::size_t>(j)]
                           : (cfg.center ? x[reflect_index(j, len)] : 0.0);
      frame[static_cast<std::size_t>(i)] = v * window[static_cast<std::size_t>(i)];
    }
    auto& out = spec.frames[static_cast<std::size_t>(l)];
    out.resize(static_cast<std::size_t>(spec.bins));
    fft.forward(frame.data(), out.data());
  }
  return spec;
}

// Least-squares overlap-add inverse: windowed frames are accumulated and
// divided by the summed squared window, which inverts the forward transform
// exactly wherever the window energy is bounded away from zero.
inline std::vector<double> istft_samples(const Spectrogram& spec,
                                         std::int64_t out_len) {
  const StftConfig& cfg = spec.config;
  check_stft_config(cfg);
  if (spec.bins != cfg.bins())
    throw Error("istft: spectrogram bins do not match config");
  if (spec.frames.empty()) throw Error("istft: empty spectrogram");
  if (out_len <= 0) throw Error("istft: output length must be positive");

  const std::int64_t num_frames = spec.num_frames();
  const std::int64_t pad = cfg.center ? cfg.win_len / 2 : 0;

  const std::vector<double> window = make_window(cfg.window, cfg.win_len);
  RealFft fft(cfg.win_len);

  const std::int64_t total = (num_frames - 1) * cfg.hop + cfg.win_len;
  std::vector<double> acc(static_cast<std::size_t>(total), 0.0);
  std::vector<double> norm(static_cast<std::size_t>(total), 0.0);
  std::vector<double> frame(static_cast<std::size_t>(cfg.win_len));
  for (std::int64_t l = 0; l < num_frames; ++l) {
    const auto& in = spec.frames[static_cast<std::size_t>(l)];
    if (static_cast<int>(in.size()) != spec.bins)
      throw Error("istft: ragged spectrogram");
    fft.inverse(in.data(), frame.data());
    const std::int64_t start = l * cfg.hop;
    for (int i = 0; i < cfg.win_len; ++i) {
      const double w = window[static_cast<std::size_t>(i)];
      acc[static_cast<std::size_t>(start + i)] +=
          frame[static_cast<std::size_t>(i)] * w;
      norm[static_cast<std::size_t>(start + i)] += w * w;
    }
  }

  constexpr double kEps = 1e-12;
  std::vector<double> y(static_cast<std::size_t>(out_len), 0.0);
  for (std::int64_t i = 0; i < out_len; ++i) {
    const std::int64_t j = i + pad;
    if (j < total && norm[static_cast<std::size_t>(j)] > kEps)
      y[static_cast<std::size_t>(i)] =
          acc[static_cast<std::size_t>(j)] / norm[static_cast<std::size_t>(j)];
  }
  return y;
}

}  // namespace detail

inline Spectrogram stft(const AudioBuffer& audio, const StftConfig& cfg = {}) {
  check_audio(audio, "stft");
  return detail::stft_samples(audio.samples, audio.sample_rate, cfg);
}

// out_len < 0 restores the recorded original length; a non-negative value
// overrides it (trimming or zero-padding the tail).
inline AudioBuffer istft(const Spectrogram& spec, std::int64_t out_len = -1) {
  if (out_len < 0) out_len = spec.original_len;
  return AudioBuffer(detail::istft_samples(spec, out_len), spec.sample_rate);
}

struct CompressionParams {
  double alpha = 0.5;  // magnitude exponent
  double beta = 0.33;  // output scale
};

inline void check_compression_params(const CompressionParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw Error("compression: alpha and beta must be positive");
}

// Dynamic range compression X -> beta * |X|^alpha * exp(i arg X).
inline Spectrogram compress(const Spectrogram& spec,
                            const CompressionParams& p = {}) {
  check_compression_params(p);
  Spectrogram out = spec;
  for (auto& frame : out.frames)
    for (auto& v : frame) {
      const double mag = std::abs(v);
      v = mag > 0.0 ? std::polar(p.beta * std::pow(mag, p.alpha), std::arg(v))
                    : std::complex<double>(0.0, 0.0);
    }
  return out;
}

// Exact inverse of compress for the same parameters.
inline Spectrogram decompress(const Spectrogram& spec,
                              const CompressionParams& p = {}) {
  check_compression_params(p);
  Spectrogram out = spec;
  for (auto& frame : out.frames)
    for (auto& v : frame) {
      const double mag = std::abs(v);
      v = mag > 0.0 ? std::polar(std::pow(mag / p.beta, 1.0 / p.alpha),
                                 std::arg(v))
                    : std::complex<double>(0.0, 0.0);
    }
  return out;
}

}  // namespace seaug
