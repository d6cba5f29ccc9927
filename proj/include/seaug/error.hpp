// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace seaug {

// Runtime failure while processing data (I/O, bad audio, numeric trouble).
// The CLI maps this to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration, arguments, or preconditions the caller controls.
// The CLI maps this to exit code 2.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg) : Error(msg) {}
};

}  // namespace seaug
