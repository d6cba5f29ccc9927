// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Writes a fixed set of clean/degraded wav pairs used to cross-check the
// frequency-weighted segmental SNR against an independent implementation.
// The set is deterministic, so the checked-in expected values stay valid.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/rng.hpp"
#include "seaug/wav.hpp"

namespace {

constexpr int kRate = 16000;
constexpr int kPairs = 20;

// Harmonic tone bursts with silent gaps, loosely voice-like in envelope.
std::vector<double> make_clean(seaug::Rng& rng, double seconds) {
  const int len = static_cast<int>(seconds * kRate);
  std::vector<double> x(static_cast<std::size_t>(len), 0.0);
  const double f0 = rng.uniform(90.0, 300.0);
  int pos = static_cast<int>(rng.uniform(0.02, 0.08) * kRate);
  while (pos < len) {
    const int burst = static_cast<int>(rng.uniform(0.12, 0.30) * kRate);
    const int gap = static_cast<int>(rng.uniform(0.03, 0.10) * kRate);
    const double jitter = rng.uniform(0.9, 1.1);
    for (int i = 0; i < burst && pos + i < len; ++i) {
      const double t = static_cast<double>(i) / kRate;
      const double env =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (burst - 1.0));
      double s = 0.0;
      for (int h = 1; h <= 4; ++h)
        s += std::sin(2.0 * std::numbers::pi * f0 * jitter * h * t) / h;
      x[static_cast<std::size_t>(pos + i)] = 0.25 * env * s;
    }
    pos += burst + gap;
  }
  return x;
}

std::vector<double> make_noise(seaug::Rng& rng, std::size_t len, bool colored) {
  std::vector<double> n(len);
  double state = 0.0;
  for (auto& v : n) {
    const double w = rng.uniform(-1.0, 1.0);
    if (colored) {
      state = 0.92 * state + w;  // one-pole lowpass for a tilted spectrum
      v = 0.15 * state;
    } else {
      v = w;
    }
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_oracle_fixtures <out_dir>\n";
    return 2;
  }
  const std::filesystem::path out(argv[1]);
  seaug::Rng rng(0x5eab0131u);

  for (int i = 0; i < kPairs; ++i) {
    const double seconds = rng.uniform(1.2, 2.4);
    std::vector<double> clean = make_clean(rng, seconds);

    std::vector<double> test = clean;
    if (i == 0) {
      // identical pair: both implementations must hit the upper clamp
    } else {
      const bool colored = (i % 2) == 0;
      const double snr_db = -5.0 + 30.0 * (i - 1) / (kPairs - 2.0);
      std::vector<double> noise = make_noise(rng, clean.size(), colored);
      const seaug::AudioBuffer cb(std::vector<double>(clean), kRate);
      const seaug::AudioBuffer nb(std::vector<double>(noise), kRate);
      const double g = seaug::rms(cb) / seaug::rms(nb) *
                       std::pow(10.0, -snr_db / 20.0);
      const double gain = (i % 5 == 0) ? 0.7 : 1.0;  // occasional level error
      for (std::size_t k = 0; k < test.size(); ++k)
        test[k] = gain * clean[k] + g * noise[k];
    }

    char name[32];
    std::snprintf(name, sizeof(name), "%02d.wav", i);
    seaug::save_wav(seaug::AudioBuffer(std::move(clean), kRate),
                    out / "clean" / name);
    seaug::save_wav(seaug::AudioBuffer(std::move(test), kRate),
                    out / "test" / name);
  }
  std::cout << "wrote " << kPairs << " pairs under " << out.string() << "\n";
  return 0;
}
