#pragma once

#include <stdexcept>
#include <string>

namespace acthull {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied inconsistent or out-of-contract arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during a numerical procedure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; the message names the offending position.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (missing file, short write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Training diverged (non-finite loss).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch)
      : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace acthull
