#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdmap {

/// Precondition or argument violation (bad class id, out-of-bounds pixel, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or malformed external input (mask files, sidecars, configs).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Map references that do not resolve, detected before any output is written.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// OSM/XML parse failure carrying the 1-based source line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hdmap
