#pragma once

#include <stdexcept>
#include <string>

namespace pcsimple {

// Base for every error raised by the library. Each subclass maps to one
// failure family so callers (notably the CLI) can translate them to exit
// codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or degenerate input data (missing values, constant columns, bad CSV).
class DataError : public Error {
 public:
  using Error::Error;
};

// The population model violates its invariants (e.g. non-PD covariance).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Request exceeds what an exhaustive routine is willing to enumerate.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Least-squares refit on a selected support is not identifiable.
class RefitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcsimple
