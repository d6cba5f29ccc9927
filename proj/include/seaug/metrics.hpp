// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"
#include "seaug/fft.hpp"
#include "seaug/manifest.hpp"
#include "seaug/stft.hpp"

namespace seaug {

enum class MetricKind { kFwSsnr, kSegSnr, kExternalPesq };

inline std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::kFwSsnr: return "fwssnr";
    case MetricKind::kSegSnr: return "segsnr";
    case MetricKind::kExternalPesq: return "pesq";
  }
  throw Error("to_string: bad metric kind");
}

inline MetricKind metric_from_string(const std::string& s) {
  if (s == "fwssnr") return MetricKind::kFwSsnr;
  if (s == "segsnr") return MetricKind::kSegSnr;
  if (s == "pesq") return MetricKind::kExternalPesq;
  throw Error("unknown metric: " + s);
}

struct MetricValue {
  MetricKind metric = MetricKind::kFwSsnr;
  double value = 0.0;
  std::string utt_id;
};

struct DeltaValue {
  MetricKind metric = MetricKind::kFwSsnr;
  double delta = 0.0;
  std::string utt_id;
};

struct GroupReport {
  Group group = Group::kNeurotypical;
  MetricKind metric = MetricKind::kFwSsnr;
  double mean = 0.0;
  double ci_halfwidth = 0.0;
  int n = 0;
};

// Fixed parameterization of the frame-wise metrics. All values are part of
// the reproducibility contract and mirrored by the independent oracle script.
struct FwSsnrParams {
  double frame_seconds = 0.032;
  double hop_seconds = 0.016;
  int num_bands = 25;
  double band_low_hz = 50.0;
  double weight_exponent = 0.2;     // weights = clean band magnitude ^ 0.2
  double clamp_low_db = -10.0;
  double clamp_high_db = 35.0;
  double active_threshold = 1e-4;   // frame energy > peak * 1e-4 is active
};

namespace detail {

inline double hz_to_mel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}
inline double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Triangular filters with peaks equally spaced on the mel scale between
// band_low_hz and Nyquist; filters[j][k] weights FFT bin k in band j.
inline std::vector<std::vector<double>> mel_filterbank(int num_bands,
                                                       double low_hz,
                                                       int sample_rate,
                                                       int fft_len) {
  const int bins = fft_len / 2 + 1;
  const double high_hz = sample_rate / 2.0;
  const double mel_low = hz_to_mel(low_hz);
  const double mel_high = hz_to_mel(high_hz);
  std::vector<double> edges(static_cast<std::size_t>(num_bands) + 2);
  for (int i = 0; i < num_bands + 2; ++i)
    edges[static_cast<std::size_t>(i)] = mel_to_hz(
        mel_low + (mel_high - mel_low) * i / (num_bands + 1));

  std::vector<std::vector<double>> filters(
      static_cast<std::size_t>(num_bands),
      std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  for (int j = 0; j < num_bands; ++j) {
    const double lo = edges[static_cast<std::size_t>(j)];
    const double mid = edges[static_cast<std::size_t>(j) + 1];
    const double hi = edges[static_cast<std::size_t>(j) + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_len;
      double w = 0.0;
      if (f >= lo && f <= mid && mid > lo)
        w = (f - lo) / (mid - lo);
      else if (f > mid && f <= hi && hi > mid)
        w = (hi - f) / (hi - mid);
      filters[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = w;
    }
  }
  return filters;
}

inline double clamp_db(double v, const FwSsnrParams& p) {
  return std::min(p.clamp_high_db, std::max(p.clamp_low_db, v));
}

// Ratio -> dB with guards: a vanishing denominator saturates at the clamp
// ceiling, a vanishing numerator at the floor, so no NaN can escape.
inline double guarded_snr_db(double num, double den, const FwSsnrParams& p) {
  constexpr double kTiny = 1e-30;
  if (den <= kTiny) return p.clamp_high_db;
  if (num <= kTiny) return p.clamp_low_db;
  return clamp_db(10.0 * std::log10(num / den), p);
}

struct FramePlan {
  int frame_len = 0;
  int hop = 0;
  std::vector<std::int64_t> starts;   // all frames
  std::vector<char> active;           // per frame, from clean energy
};

// Frames both signals identically and marks frames whose clean energy is
// within 40 dB (power) of the loudest frame.
inline FramePlan plan_frames(const std::vector<double>& clean, int sample_rate,
                             const FwSsnrParams& p) {
  FramePlan plan;
  plan.frame_len = static_cast<int>(std::lround(p.frame_seconds * sample_rate));
  plan.hop = static_cast<int>(std::lround(p.hop_seconds * sample_rate));
  if (plan.frame_len <= 0 || plan.hop <= 0)
    throw Error("metric framing collapsed; sample rate too low");
  const auto len = static_cast<std::int64_t>(clean.size());
  if (len < plan.frame_len)
    throw Error("metric input shorter than one analysis frame");
  std::vector<double> energies;
  for (std::int64_t s = 0; s + plan.frame_len <= len; s += plan.hop) {
    plan.starts.push_back(s);
    double e = 0.0;
    for (int i = 0; i < plan.frame_len; ++i) {
      const double v = clean[static_cast<std::size_t>(s + i)];
      e += v * v;
    }
    energies.push_back(e);
  }
  const double peak = *std::max_element(energies.begin(), energies.end());
  if (peak <= 0.0) throw Error("silent clean reference");
  plan.active.resize(plan.starts.size());
  for (std::size_t i = 0; i < energies.size(); ++i)
    plan.active[i] = energies[i] > peak * p.active_threshold ? 1 : 0;
  return plan;
}

// Pads or trims `test` to the length of `clean`.
inline std::vector<double> conform_length(const std::vector<double>& test,
                                          std::size_t len) {
  std::vector<double> out = test;
  out.resize(len, 0.0);
  return out;
}

}  // namespace detail

// Frequency-weighted segmental SNR: per active frame, band SNRs on a
// 25-band mel filterbank are weighted by (clean band magnitude)^0.2 and
// averaged; per-band and per-frame values are clamped to [-10, 35] dB, so
// identical signals score exactly 35.
inline MetricValue fwssnr(const AudioBuffer& clean, const AudioBuffer& test,
                          const std::string& utt_id = "",
                          const FwSsnrParams& params = {}) {
  check_audio(clean, "fwssnr(clean)");
  check_audio(test, "fwssnr(test)");
  if (clean.sample_rate != test.sample_rate)
    throw Error("fwssnr: sample rates differ");

  const detail::FramePlan plan =
      detail::plan_frames(clean.samples, clean.sample_rate, params);
  const std::vector<double> test_c =
      detail::conform_length(test.samples, clean.size());

  RealFft fft(plan.frame_len);
  const std::vector<double> window =
      make_window(WindowKind::kHann, plan.frame_len);
  const auto filters = detail::mel_filterbank(
      params.num_bands, params.band_low_hz, clean.sample_rate, plan.frame_len);
  const int bins = fft.bins();

  std::vector<double> buf(static_cast<std::size_t>(plan.frame_len));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(bins));
  auto band_mags = [&](const std::vector<double>& x, std::int64_t start,
                       std::vector<double>& out) {
    for (int i = 0; i < plan.frame_len; ++i)
      buf[static_cast<std::size_t>(i)] =
          x[static_cast<std::size_t>(start + i)] *
          window[static_cast<std::size_t>(i)];
    fft.forward(buf.data(), spec.data());
    for (int j = 0; j < params.num_bands; ++j) {
      double acc = 0.0;
      const auto& tri = filters[static_cast<std::size_t>(j)];
      for (int k = 0; k < bins; ++k)
        acc += tri[static_cast<std::size_t>(k)] *
               std::norm(spec[static_cast<std::size_t>(k)]);
      out[static_cast<std::size_t>(j)] = std::sqrt(acc);
    }
  };

  std::vector<double> cb(static_cast<std::size_t>(params.num_bands));
  std::vector<double> tb(static_cast<std::size_t>(params.num_bands));
  double total = 0.0;
  int active = 0;
  for (std::size_t f = 0; f < plan.starts.size(); ++f) {
    if (!plan.active[f]) continue;
    band_mags(clean.samples, plan.starts[f], cb);
    band_mags(test_c, plan.starts[f], tb);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < params.num_bands; ++j) {
      const double c = cb[static_cast<std::size_t>(j)];
      const double t = tb[static_cast<std::size_t>(j)];
      const double w = std::pow(std::max(c, 0.0), params.weight_exponent);
      const double snr =
          detail::guarded_snr_db(c * c, (c - t) * (c - t), params);
      num += w * snr;
      den += w;
    }
    const double frame_snr =
        den > 0.0 ? detail::clamp_db(num / den, params) : params.clamp_low_db;
    total += frame_snr;
    ++active;
  }
  if (active == 0) throw Error("fwssnr: no active frames");
  return MetricValue{MetricKind::kFwSsnr, total / active, utt_id};
}

// Plain segmental SNR on the same framing and clamping rules, computed on
// waveforms: per active frame 10*log10(sum x^2 / sum (x - x_hat)^2).
inline MetricValue seg_snr(const AudioBuffer& clean, const AudioBuffer& test,
                           const std::string& utt_id = "",
                           const FwSsnrParams& params = {}) {
  check_audio(clean, "seg_snr(clean)");
  check_audio(test, "seg_snr(test)");
  if (clean.sample_rate != test.sample_rate)
    throw Error("seg_snr: sample rates differ");

  const detail::FramePlan plan =
      detail::plan_frames(clean.samples, clean.sample_rate, params);
  const std::vector<double> test_c =
      detail::conform_length(test.samples, clean.size());

  double total = 0.0;
  int active = 0;
  for (std::size_t f = 0; f < plan.starts.size(); ++f) {
    if (!plan.active[f]) continue;
    double sig = 0.0, err = 0.0;
    for (int i = 0; i < plan.frame_len; ++i) {
      const auto idx = static_cast<std::size_t>(plan.starts[f] + i);
      const double x = clean.samples[idx];
      const double d = x - test_c[idx];
      sig += x * x;
      err += d * d;
    }
    total += detail::guarded_snr_db(sig, err, params);
    ++active;
  }
  if (active == 0) throw Error("seg_snr: no active frames");
  return MetricValue{MetricKind::kSegSnr, total / active, utt_id};
}

// Improvement of the enhanced signal over the noisy one, both scored against
// the same clean reference.
inline DeltaValue delta(const MetricValue& enhanced,
                        const MetricValue& noisy) {
  if (enhanced.metric != noisy.metric)
    throw Error("delta: metric kinds differ");
  if (enhanced.utt_id != noisy.utt_id)
    throw Error("delta: utterance ids differ (" + enhanced.utt_id + " vs " +
                noisy.utt_id + ")");
  return DeltaValue{enhanced.metric, enhanced.value - noisy.value,
                    enhanced.utt_id};
}

// Two-sided normal critical values for the supported confidence levels.
inline double normal_critical_value(double level) {
  if (level == 0.90) return 1.6449;
  if (level == 0.95) return 1.9600;
  if (level == 0.99) return 2.5758;
  throw Error("unsupported confidence level (use 0.90, 0.95 or 0.99)");
}

// Per-group mean and normal-approximation confidence halfwidth
// z * sd / sqrt(n); a single observation reports halfwidth 0.
inline std::vector<GroupReport> aggregate(
    const std::vector<DeltaValue>& values,
    const std::map<std::string, Group>& group_of, double level = 0.95) {
  const double z = normal_critical_value(level);
  std::map<std::pair<Group, MetricKind>, std::vector<double>> buckets;
  for (const auto& v : values) {
    auto it = group_of.find(v.utt_id);
    if (it == group_of.end())
      throw Error("aggregate: utterance " + v.utt_id + " has no group");
    buckets[{it->second, v.metric}].push_back(v.delta);
  }
  if (buckets.empty()) throw Error("aggregate: no values");
  std::vector<GroupReport> reports;
  for (const auto& [key, vals] : buckets) {
    const auto n = static_cast<int>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    double ci = 0.0;
    if (n > 1) {
      double ss = 0.0;
      for (double v : vals) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / (n - 1));
      ci = z * sd / std::sqrt(static_cast<double>(n));
    }
    reports.push_back(GroupReport{key.first, key.second, mean, ci, n});
  }
  return reports;
}

inline std::map<std::string, Group> group_lookup(const Manifest& manifest) {
  std::map<std::string, Group> out;
  for (const auto& e : manifest.entries) out[e.utt_id] = e.group;
  return out;
}

// Reads externally computed perceptual scores from a CSV with the exact
// header utt_id,metric,value; one row per utterance, ids unique.
inline std::vector<MetricValue> ingest_external_scores(
    const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw Error("cannot open scores csv: " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty scores csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "utt_id,metric,value")
    throw Error("scores csv must start with header utt_id,metric,value");

  std::vector<MetricValue> out;
  std::set<std::string> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string utt, metric, value;
    if (!std::getline(ss, utt, ',') || !std::getline(ss, metric, ',') ||
        !std::getline(ss, value))
      throw Error("malformed scores row at line " + std::to_string(lineno));
    if (metric != "pesq")
      throw Error("unsupported external metric '" + metric + "' at line " +
                  std::to_string(lineno));
    if (!seen.insert(utt).second)
      throw Error("duplicate utterance in scores csv: " + utt);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &pos);
    } catch (const std::exception&) {
      throw Error("non-numeric score at line " + std::to_string(lineno));
    }
    if (pos != value.size() || !std::isfinite(v))
      throw Error("non-numeric score at line " + std::to_string(lineno));
    out.push_back(MetricValue{MetricKind::kExternalPesq, v, utt});
  }
  return out;
}

namespace detail {

inline std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

// CSV report: group,metric,mean,ci,n with fixed six-decimal formatting so
// identical results serialize to identical bytes.
inline void write_report_csv(const std::vector<GroupReport>& reports,
                             const std::filesystem::path& path) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report: " + path.string());
  out << "group,metric,mean,ci,n\n";
  for (const auto& r : reports)
    out << to_string(r.group) << ',' << to_string(r.metric) << ','
        << detail::format_fixed(r.mean) << ','
        << detail::format_fixed(r.ci_halfwidth) << ',' << r.n << "\n";
  if (!out) throw Error("report write failed: " + path.string());
}

// Human-oriented aligned table of the same rows.
inline std::string render_report_table(const std::vector<GroupReport>& reports) {
  std::ostringstream out;
  out << "group          metric   mean        ci          n\n";
  for (const auto& r : reports) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-14s %-8s %11.6f %11.6f %5d\n",
                  to_string(r.group).c_str(), to_string(r.metric).c_str(),
                  r.mean, r.ci_halfwidth, r.n);
    out << line;
  }
  return out.str();
}

}  // namespace seaug
