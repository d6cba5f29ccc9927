// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>

#include "seaug/error.hpp"

namespace seaug {

// Provenance of a corpus entry: how it was derived from original recordings.
enum class Strategy {
  kNone,         // original recording
  kPitchShift,
  kTimeStretch,
  kSpecMix,
  kSynthetic,    // externally generated speech, ingested
  kNoiseAdd,     // fresh noise mixture of an existing clean signal
};

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kNone: return "none";
    case Strategy::kPitchShift: return "pitch_shift";
    case Strategy::kTimeStretch: return "time_stretch";
    case Strategy::kSpecMix: return "specmix";
    case Strategy::kSynthetic: return "synthetic";
    case Strategy::kNoiseAdd: return "noise";
  }
  throw Error("to_string: bad strategy value");
}

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "none") return Strategy::kNone;
  if (s == "pitch_shift") return Strategy::kPitchShift;
  if (s == "time_stretch") return Strategy::kTimeStretch;
  if (s == "specmix") return Strategy::kSpecMix;
  if (s == "synthetic") return Strategy::kSynthetic;
  if (s == "noise") return Strategy::kNoiseAdd;
  throw UsageError("unknown strategy: " + s);
}

}  // namespace seaug
