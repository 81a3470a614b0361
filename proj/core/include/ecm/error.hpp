#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecm {

/// Invalid argument or out-of-range parameter value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A rewire request that would break the simple-graph invariants.
class RewireError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input data that parses but is semantically unusable (e.g. unlabeled nodes).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the source name and 1-based line number.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace ecm
