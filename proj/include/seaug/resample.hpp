// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"

namespace seaug {

namespace detail {

// Zeroth-order modified Bessel function via its power series; adequate for
// the Kaiser-window argument range used here.
inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x * x) / (4.0 * static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Right half of a Kaiser-windowed sinc low-pass, tabulated at a fixed
// sub-sample resolution and evaluated with linear interpolation.
class SincTable {
 public:
  static constexpr int kZeroCrossings = 32;     // half-width in input samples
  static constexpr int kStepsPerCrossing = 512;
  static constexpr double kBeta = 9.0;
  static constexpr double kRolloff = 0.9375;    // cutoff as fraction of Nyquist

  SincTable() {
    const int n = kZeroCrossings * kStepsPerCrossing;
    table_.resize(static_cast<std::size_t>(n) + 2, 0.0);
    const double i0_beta = bessel_i0(kBeta);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / kStepsPerCrossing;
      const double arg = pi * kRolloff * x;
      const double sinc = (i == 0) ? 1.0 : std::sin(arg) / arg;
      const double u = x / kZeroCrossings;
      const double window = bessel_i0(kBeta * std::sqrt(1.0 - u * u)) / i0_beta;
      table_[static_cast<std::size_t>(i)] = kRolloff * sinc * window;
    }
  }

  double operator()(double x) const {
    x = std::fabs(x) * kStepsPerCrossing;
    const auto idx = static_cast<std::size_t>(x);
    if (idx >= static_cast<std::size_t>(kZeroCrossings) * kStepsPerCrossing)
      return 0.0;
    const double frac = x - static_cast<double>(idx);
    return table_[idx] + frac * (table_[idx + 1] - table_[idx]);
  }

  static const SincTable& instance() {
    static const SincTable table;
    return table;
  }

 private:
  std::vector<double> table_;
};

}  // namespace detail

// Resamples by an arbitrary positive ratio (output rate / input rate).
// Output sample n sits at input time n / ratio; when downsampling, the
// kernel is dilated by the ratio so it doubles as an anti-aliasing filter.
// The signal is treated as zero outside its extent.
inline std::vector<double> resample_ratio(const std::vector<double>& x,
                                          double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw Error("resample_ratio: ratio must be positive and finite");
  if (x.empty()) throw Error("resample_ratio: empty input");
  if (ratio == 1.0) return x;

  const auto& kernel = detail::SincTable::instance();
  const double scale = std::min(1.0, ratio);
  const double radius = detail::SincTable::kZeroCrossings / scale;
  const auto in_len = static_cast<std::int64_t>(x.size());
  const auto out_len =
      std::llround(static_cast<double>(x.size()) * ratio);
  if (out_len <= 0) throw Error("resample_ratio: output would be empty");

  std::vector<double> y(static_cast<std::size_t>(out_len), 0.0);
  for (std::int64_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) / ratio;
    const auto m0 =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(t - radius)));
    const auto m1 = std::min<std::int64_t>(
        in_len - 1, static_cast<std::int64_t>(std::floor(t + radius)));
    double acc = 0.0;
    for (std::int64_t m = m0; m <= m1; ++m)
      acc += x[static_cast<std::size_t>(m)] *
             kernel(scale * (t - static_cast<double>(m)));
    y[static_cast<std::size_t>(n)] = scale * acc;
  }
  return y;
}

// Rate conversion between sample rates; equal rates pass through untouched.
inline AudioBuffer resample(const AudioBuffer& in, int out_rate) {
  check_audio(in, "resample");
  if (out_rate <= 0) throw Error("resample: target rate must be positive");
  if (out_rate == in.sample_rate) return in;
  const double ratio =
      static_cast<double>(out_rate) / static_cast<double>(in.sample_rate);
  return AudioBuffer(resample_ratio(in.samples, ratio), out_rate);
}

}  // namespace seaug
