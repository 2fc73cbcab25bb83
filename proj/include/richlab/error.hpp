#pragma once

#include <stdexcept>
#include <string>

namespace richlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment / seed / field configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point or target set lies outside the domain it was queried against.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The requested combination is valid but not implemented (e.g. shape checks in d != 2).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace richlab
