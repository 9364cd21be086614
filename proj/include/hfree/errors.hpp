#pragma once

#include <stdexcept>
#include <string>

namespace hfree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, violated precondition, or invalid configuration.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An exhaustive routine was asked to run beyond its hard size limit.
class SizeLimitExceeded : public Error {
public:
  using Error::Error;
};

/// The process has no open pairs left.
class ProcessTerminated : public Error {
public:
  using Error::Error;
};

} // namespace hfree
