#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hexfem {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structurally well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (zero memory budget, bad worker count, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-positive Jacobian determinant at a Gauss point.
class DegenerateElementError : public Error {
 public:
  DegenerateElementError(std::int64_t element, int gauss_point, double det)
      : Error("degenerate element " + std::to_string(element) + ": det(J) = " +
              std::to_string(det) + " at Gauss point " +
              std::to_string(gauss_point)),
        element_(element),
        gauss_point_(gauss_point) {}
  std::int64_t element() const noexcept { return element_; }
  int gauss_point() const noexcept { return gauss_point_; }

 private:
  std::int64_t element_;
  int gauss_point_;
};

/// Failure to stage a group of elements on a compute backend.
class ResourceError : public Error {
 public:
  ResourceError(std::size_t group, const std::string& what)
      : Error("group " + std::to_string(group) + ": " + what), group_(group) {}
  std::size_t group() const noexcept { return group_; }

 private:
  std::size_t group_;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hexfem
