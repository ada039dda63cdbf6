#pragma once

#include <stdexcept>
#include <string>

namespace obd {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (non-positive parameter, unknown kind, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A point lies outside the domain of a function, or a requested level is infeasible.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative solver exhausted its budget without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// The combination of inputs is valid but not handled by any solver route.
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace obd
