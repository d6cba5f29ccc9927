// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Shared synthesis helpers for the test suite: deterministic voice-like
// signals, four stand-in noise textures, and writers for a small on-disk
// corpus shaped like the real pipeline input.

#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"
#include "seaug/fft.hpp"
#include "seaug/rng.hpp"
#include "seaug/wav.hpp"

namespace testsup {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& hint) {
    seaug::Rng rng(static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count()));
    path_ = std::filesystem::temp_directory_path() /
            (hint + "_" + std::to_string(rng.next_u64() & 0xffffff));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline seaug::AudioBuffer sine(double freq, double seconds, int rate,
                               double amp = 0.3) {
  const auto len = static_cast<std::size_t>(seconds * rate);
  std::vector<double> x(len);
  for (std::size_t i = 0; i < len; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate);
  return seaug::AudioBuffer(std::move(x), rate);
}

// Harmonic syllable bursts with silent gaps and a silent lead-in, so noise
// estimators see noise-only frames at the start of any mixture.
inline seaug::AudioBuffer speech_like(seaug::Rng& rng, double seconds,
                                      int rate, double lead_in = 0.15) {
  const int len = static_cast<int>(seconds * rate);
  std::vector<double> x(static_cast<std::size_t>(len), 0.0);
  const double f0 = rng.uniform(95.0, 280.0);
  int pos = static_cast<int>(lead_in * rate);
  while (pos < len) {
    const int burst = static_cast<int>(rng.uniform(0.10, 0.28) * rate);
    const int gap = static_cast<int>(rng.uniform(0.03, 0.09) * rate);
    const double jitter = rng.uniform(0.92, 1.08);
    for (int i = 0; i < burst && pos + i < len; ++i) {
      const double t = static_cast<double>(i) / rate;
      const double env =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (burst - 1.0));
      double s = 0.0;
      for (int h = 1; h <= 5; ++h)
        s += std::sin(2.0 * std::numbers::pi * f0 * jitter * h * t) / h;
      x[static_cast<std::size_t>(pos + i)] = 0.22 * env * s;
    }
    pos += burst + gap;
  }
  return seaug::AudioBuffer(std::move(x), rate);
}

// Four stationary noise textures standing in for the transport/babble
// recordings: a low rumble, a tilted hiss, a flat hiss, and a mains-style hum.
inline seaug::AudioBuffer noise_like(seaug::Rng& rng, const std::string& kind,
                                     double seconds, int rate) {
  const auto len = static_cast<std::size_t>(seconds * rate);
  std::vector<double> x(len);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double w = rng.uniform(-1.0, 1.0);
    if (kind == "BUS") {  // brown-ish rumble
      s1 = 0.995 * s1 + 0.05 * w;
      x[i] = 4.0 * s1;
    } else if (kind == "CAF") {  // pink-ish chatter bed
      s1 = 0.95 * s1 + 0.3 * w;
      s2 = 0.7 * s2 + 0.3 * w;
      x[i] = 0.6 * (s1 + s2);
    } else if (kind == "STR") {  // broadband hiss
      x[i] = 0.35 * w;
    } else if (kind == "PED") {  // hum plus light hiss
      const double t = static_cast<double>(i) / rate;
      x[i] = 0.25 * std::sin(2.0 * std::numbers::pi * 100.0 * t) +
             0.12 * std::sin(2.0 * std::numbers::pi * 200.0 * t) + 0.08 * w;
    } else {
      throw seaug::Error("unknown noise kind: " + kind);
    }
  }
  return seaug::AudioBuffer(std::move(x), rate);
}

// Raw recording tree: speakers.csv plus clean/{speaker}/{stem}.wav, two
// groups, four speakers, five utterances each, at a camera-style 44.1 kHz.
inline void write_desk_corpus(const std::filesystem::path& dir,
                              int rate = 44100) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "speakers.csv", std::ios::binary);
    csv << "speaker_id,group\n"
        << "NT01,neurotypical\n"
        << "NT02,neurotypical\n"
        << "PT01,pathological\n"
        << "PT02,pathological\n";
  }
  seaug::Rng rng(0xdeadbeefcafe1234ull);
  const std::vector<std::string> speakers = {"NT01", "NT02", "PT01", "PT02"};
  for (const auto& spk : speakers) {
    for (int u = 1; u <= 5; ++u) {
      const double seconds = rng.uniform(1.0, 1.6);
      char stem[16];
      std::snprintf(stem, sizeof(stem), "u%02d", u);
      seaug::save_wav(speech_like(rng, seconds, rate),
                      dir / "clean" / spk / (std::string(stem) + ".wav"));
    }
  }
}

// Typed noise tree: {BUS,CAF,PED,STR}/*.wav, two files per type.
inline void write_noise_corpus(const std::filesystem::path& dir,
                               int rate = 16000) {
  seaug::Rng rng(0x00c0ffee12345678ull);
  for (const std::string kind : {"BUS", "CAF", "PED", "STR"}) {
    seaug::save_wav(noise_like(rng, kind, 6.0, rate),
                    dir / kind / "take1.wav");
    seaug::save_wav(noise_like(rng, kind, 7.3, rate),
                    dir / kind / "take2.wav");
  }
}

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw seaug::Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string require_env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0')
    throw seaug::Error(std::string("environment variable not set: ") + name);
  return v;
}

// Dominant-frequency estimate via a zero-padded FFT peak with parabolic
// interpolation, over the middle half of the signal.
inline double dominant_freq(const seaug::AudioBuffer& audio) {
  const std::size_t n = audio.size();
  const std::size_t lo = n / 4;
  const std::size_t seg = n / 2;
  int fft_len = 1;
  while (static_cast<std::size_t>(fft_len) < seg * 4) fft_len *= 2;
  std::vector<double> buf(static_cast<std::size_t>(fft_len), 0.0);
  for (std::size_t i = 0; i < seg; ++i) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (seg - 1.0));
    buf[i] = w * audio.samples[lo + i];
  }
  seaug::RealFft fft(fft_len);
  std::vector<std::complex<double>> spec(
      static_cast<std::size_t>(fft.bins()));
  fft.forward(buf.data(), spec.data());
  int best = 1;
  double best_mag = 0.0;
  for (int k = 1; k + 1 < fft.bins(); ++k) {
    const double m = std::abs(spec[static_cast<std::size_t>(k)]);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  const double m0 = std::abs(spec[static_cast<std::size_t>(best - 1)]);
  const double m1 = std::abs(spec[static_cast<std::size_t>(best)]);
  const double m2 = std::abs(spec[static_cast<std::size_t>(best + 1)]);
  double shift = 0.0;
  const double den = m0 - 2.0 * m1 + m2;
  if (std::abs(den) > 1e-12) shift = 0.5 * (m0 - m2) / den;
  return (best + shift) * audio.sample_rate / fft_len;
}

}  // namespace testsup
