#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairstate {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (g > 1, k > x, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A density matrix (or other state object) violates a required invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inconsistent setup: singular projector Gram matrix, unknown config key,
// missing mode-specific field.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Data carries no information (all-zero counts, zero coincidence rates).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `source` names the file (or "<stream>") and `row` is
// 1-based, 0 when the error is not tied to a single row.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t row, const std::string& what)
      : Error(source + (row > 0 ? ":" + std::to_string(row) : std::string()) +
              ": " + what),
        source_(std::move(source)),
        row_(row) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t row() const noexcept { return row_; }

 private:
  std::string source_;
  std::size_t row_;
};

}  // namespace pairstate
