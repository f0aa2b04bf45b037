#pragma once

#include <stdexcept>
#include <string>

namespace schmidtfock {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments violate a documented precondition (shape, range, statistics).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A basis or matrix would exceed the configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A decomposition failed, or an input was numerically outside tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace schmidtfock
