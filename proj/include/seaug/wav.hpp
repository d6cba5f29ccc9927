// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "seaug/audio.hpp"
#include "seaug/error.hpp"

namespace seaug {

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  std::uint64_t frames = 0;  // samples per channel
};

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

struct WavData {
  WavInfo info;
  int format = 0;       // 1 = PCM, 3 = IEEE float
  int bits = 0;
  std::vector<unsigned char> payload;
};

// Minimal RIFF/WAVE chunk walker. Unknown chunks are skipped; fmt and data
// are required. WAVE_FORMAT_EXTENSIBLE unwraps to its sub-format.
inline WavData read_wav_raw(const std::filesystem::path& path, bool want_payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open wav file: " + path.string());

  unsigned char hdr[12];
  if (!in.read(reinterpret_cast<char*>(hdr), 12))
    throw Error("truncated wav header: " + path.string());
  if (std::memcmp(hdr, "RIFF", 4) != 0 || std::memcmp(hdr + 8, "WAVE", 4) != 0)
    throw Error("not a RIFF/WAVE file: " + path.string());

  WavData wav;
  bool have_fmt = false, have_data = false;
  while (!have_data) {
    unsigned char chdr[8];
    if (!in.read(reinterpret_cast<char*>(chdr), 8)) break;
    const std::uint32_t size = read_u32(chdr + 4);
    if (std::memcmp(chdr, "fmt ", 4) == 0) {
      std::vector<unsigned char> fmt(size);
      if (!in.read(reinterpret_cast<char*>(fmt.data()), size))
        throw Error("truncated fmt chunk: " + path.string());
      if (size < 16) throw Error("fmt chunk too small: " + path.string());
      wav.format = read_u16(fmt.data());
      wav.info.channels = read_u16(fmt.data() + 2);
      wav.info.sample_rate = static_cast<int>(read_u32(fmt.data() + 4));
      wav.bits = read_u16(fmt.data() + 14);
      if (wav.format == 0xFFFE) {  // extensible: sub-format GUID leads with the tag
        if (size < 40) throw Error("truncated extensible fmt: " + path.string());
        wav.format = read_u16(fmt.data() + 24);
      }
      have_fmt = true;
      if (size % 2) in.seekg(1, std::ios::cur);
    } else if (std::memcmp(chdr, "data", 4) == 0) {
      if (want_payload) {
        wav.payload.resize(size);
        if (!in.read(reinterpret_cast<char*>(wav.payload.data()), size))
          throw Error("truncated data chunk: " + path.string());
      } else {
        wav.payload.resize(0);
        wav.payload.reserve(0);
        in.seekg(size, std::ios::cur);
      }
      const std::uint32_t bytes_per_frame =
          static_cast<std::uint32_t>(wav.info.channels * (wav.bits / 8));
      wav.info.frames = bytes_per_frame ? size / bytes_per_frame : 0;
      have_data = true;
    } else {
      in.seekg(size + (size % 2), std::ios::cur);
    }
  }
  if (!have_fmt || !have_data)
    throw Error("missing fmt or data chunk: " + path.string());
  if (wav.info.channels <= 0 || wav.info.sample_rate <= 0)
    throw Error("invalid wav geometry: " + path.string());
  return wav;
}

}  // namespace detail

// Header-only probe, does not load samples.
inline WavInfo wav_info(const std::filesystem::path& path) {
  return detail::read_wav_raw(path, false).info;
}

// Reads PCM16 or float32 WAV at its native rate. Multi-channel input is
// downmixed by averaging the channels.
inline AudioBuffer load_wav(const std::filesystem::path& path) {
  detail::WavData wav = detail::read_wav_raw(path, true);
  if (wav.info.frames == 0) throw Error("zero-length audio: " + path.string());

  const int ch = wav.info.channels;
  const std::uint64_t n = wav.info.frames;
  std::vector<double> mono(n, 0.0);

  if (wav.format == 1 && wav.bits == 16) {
    const unsigned char* p = wav.payload.data();
    for (std::uint64_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int c = 0; c < ch; ++c) {
        std::int16_t v = static_cast<std::int16_t>(detail::read_u16(p));
        acc += static_cast<double>(v) / 32768.0;
        p += 2;
      }
      mono[i] = acc / ch;
    }
  } else if (wav.format == 3 && wav.bits == 32) {
    const unsigned char* p = wav.payload.data();
    for (std::uint64_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int c = 0; c < ch; ++c) {
        std::uint32_t u = detail::read_u32(p);
        float f;
        std::memcpy(&f, &u, 4);
        acc += static_cast<double>(f);
        p += 4;
      }
      mono[i] = acc / ch;
    }
  } else {
    throw Error("unsupported wav encoding (need PCM16 or float32): " +
                path.string());
  }

  AudioBuffer out(std::move(mono), wav.info.sample_rate);
  check_audio(out, "load_wav");
  return out;
}

// Writes mono PCM16. Samples outside [-1, 1) are clamped; returns how many
// were clipped so callers can report or rescale.
inline std::size_t save_wav(const AudioBuffer& audio,
                            const std::filesystem::path& path) {
  check_audio(audio, "save_wav");
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write wav file: " + path.string());

  const std::uint32_t n = static_cast<std::uint32_t>(audio.size());
  const std::uint32_t data_bytes = n * 2;
  const std::uint32_t rate = static_cast<std::uint32_t>(audio.sample_rate);

  auto put_u32 = [&](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<char*>(b), 4);
  };
  auto put_u16 = [&](std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff)};
    out.write(reinterpret_cast<char*>(b), 2);
  };

  out.write("RIFF", 4);
  put_u32(36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(1);  // PCM
  put_u16(1);  // mono
  put_u32(rate);
  put_u32(rate * 2);
  put_u16(2);
  put_u16(16);
  out.write("data", 4);
  put_u32(data_bytes);

  std::size_t clipped = 0;
  for (double v : audio.samples) {
    double scaled = v * 32768.0;
    if (scaled > 32767.0) {
      scaled = 32767.0;
      ++clipped;
    } else if (scaled < -32768.0) {
      scaled = -32768.0;
      ++clipped;
    }
    put_u16(static_cast<std::uint16_t>(
        static_cast<std::int16_t>(std::lrint(scaled))));
  }
  if (!out) throw Error("wav write failed: " + path.string());
  return clipped;
}

}  // namespace seaug
