#pragma once

#include <stdexcept>
#include <string>

namespace nstore {

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or malformed input document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// No space could be made even at maximum elasticity aggressiveness.
class StorageFull : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Internal invariant violated (dangling path, dimension mismatch, ...).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace nstore
