#pragma once

#include <stdexcept>
#include <string>

namespace cgholo {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Expression text could not be parsed; carries the byte offset of the problem.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Evaluation outside the domain of a function (log of a non-positive value,
/// division by zero, map leaving its chart, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Metric is numerically singular or has the wrong signature at a point.
class SingularMetricError : public Error {
public:
  using Error::Error;
};

/// An operation that requires a non-null velocity met a null one.
class NullVelocityError : public Error {
public:
  using Error::Error;
};

/// Configuration file problems.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace cgholo
