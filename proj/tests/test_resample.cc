// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <numbers>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "seaug/audio.hpp"
#include "seaug/resample.hpp"
#include "support/fixtures.hpp"

using seaug::AudioBuffer;

namespace {

// Least-squares fit of a*cos + b*sin at a known frequency; returns the energy
// fraction left after removing that tone — a direct sideband/alias meter.
double residual_fraction(const AudioBuffer& y, double freq, std::size_t skip) {
  const std::size_t n = y.size() - 2 * skip;
  double cc = 0.0, cs = 0.0, ss = 0.0, yc = 0.0, ys = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + skip) / y.sample_rate;
    const double c = std::cos(2.0 * std::numbers::pi * freq * t);
    const double s = std::sin(2.0 * std::numbers::pi * freq * t);
    const double v = y.samples[i + skip];
    cc += c * c;
    cs += c * s;
    ss += s * s;
    yc += v * c;
    ys += v * s;
    yy += v * v;
  }
  const double det = cc * ss - cs * cs;
  const double a = (yc * ss - ys * cs) / det;
  const double b = (ys * cc - yc * cs) / det;
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + skip) / y.sample_rate;
    const double fit = a * std::cos(2.0 * std::numbers::pi * freq * t) +
                       b * std::sin(2.0 * std::numbers::pi * freq * t);
    const double d = y.samples[i + skip] - fit;
    resid += d * d;
  }
  return resid / yy;
}

}  // namespace

TEST_CASE("matching rates return the input unchanged", "[resample]") {
  const AudioBuffer in = testsup::sine(440.0, 0.5, 16000);
  const AudioBuffer out = seaug::resample(in, 16000);
  REQUIRE(out.sample_rate == 16000);
  REQUIRE(out.samples == in.samples);
}

TEST_CASE("output length follows the rate ratio", "[resample]") {
  std::vector<double> x(441, 0.1);
  const AudioBuffer out =
      seaug::resample(AudioBuffer(std::move(x), 44100), 16000);
  REQUIRE(std::llabs(static_cast<long long>(out.size()) - 160) <= 1);

  // General rule: round(len * ratio).
  const AudioBuffer a(std::vector<double>(10000, 0.1), 16000);
  REQUIRE(seaug::resample(a, 44100).size() ==
          static_cast<std::size_t>(std::llround(10000.0 * 44100 / 16000)));
  REQUIRE(seaug::resample(a, 8000).size() == 5000);
}

TEST_CASE("a 1 kHz tone survives 44.1k -> 16k with clean sidebands",
          "[resample]") {
  const AudioBuffer in = testsup::sine(1000.0, 1.0, 44100, 0.5);
  const AudioBuffer out = seaug::resample(in, 16000);
  REQUIRE(out.sample_rate == 16000);
  REQUIRE(testsup::dominant_freq(out) == Catch::Approx(1000.0).epsilon(0.01));
  // Everything that is not the tone (images, aliasing) must sit >= 60 dB down.
  REQUIRE(residual_fraction(out, 1000.0, 400) < 1e-6);
}

TEST_CASE("tones below 0.4x the lower rate keep their frequency",
          "[resample]") {
  for (double f : {250.0, 1500.0, 3000.0, 6000.0}) {
    const AudioBuffer down =
        seaug::resample(testsup::sine(f, 0.7, 44100, 0.5), 16000);
    REQUIRE(testsup::dominant_freq(down) == Catch::Approx(f).epsilon(0.01));
  }
  // Upsampling direction.
  const AudioBuffer up =
      seaug::resample(testsup::sine(400.0, 0.7, 16000, 0.5), 44100);
  REQUIRE(testsup::dominant_freq(up) == Catch::Approx(400.0).epsilon(0.01));
}

TEST_CASE("dc level passes through", "[resample]") {
  const AudioBuffer in(std::vector<double>(48000, 0.7), 48000);
  const AudioBuffer out = seaug::resample(in, 16000);
  for (std::size_t i = 100; i + 100 < out.size(); ++i)
    REQUIRE(out.samples[i] == Catch::Approx(0.7).margin(0.005));
}

TEST_CASE("invalid rates and empty input are rejected", "[resample]") {
  const AudioBuffer in = testsup::sine(440.0, 0.1, 16000);
  REQUIRE_THROWS_AS(seaug::resample(in, 0), seaug::Error);
  REQUIRE_THROWS_AS(seaug::resample(in, -8000), seaug::Error);
  REQUIRE_THROWS_AS(seaug::resample_ratio(std::vector<double>{}, 2.0),
                    seaug::Error);
  REQUIRE_THROWS_AS(seaug::resample_ratio(std::vector<double>{0.1}, 0.0),
                    seaug::Error);
}
