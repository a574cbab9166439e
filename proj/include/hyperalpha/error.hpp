#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperalpha {

/// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or arguments outside a formula's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quantity does not fit the integer width or representation we use.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would examine more subsets than allowed.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A solver call ran past its deadline.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

/// Malformed hypergraph file; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hyperalpha
