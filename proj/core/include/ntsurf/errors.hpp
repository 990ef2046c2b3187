#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ntsurf {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Arithmetic outside the real domain: log of a non-positive value, sqrt of a
/// negative, division by zero, or a non-finite result.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The geometry does not support the request: irregular point, degenerate
/// tangent plane, frame branch jump, violated flatness precondition.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: unknown catalog id, missing parameter, bad grid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ntsurf
