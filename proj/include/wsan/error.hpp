#pragma once

#include <stdexcept>
#include <string>

namespace wsan {

// Rejected input: bad arguments, violated preconditions, malformed files.
class InvalidArgument : public std::runtime_error {
 public:
  explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

// Internal failure of a recovery run or generator: cascade did not converge,
// circle intersection vanished, resampling budget exhausted.
class EngineError : public std::runtime_error {
 public:
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wsan
