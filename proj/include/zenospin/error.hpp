#pragma once

#include <stdexcept>
#include <string>

namespace zenospin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: invalid spin, negative field, malformed config, shape mismatch.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Eigensolver non-convergence, growing modes, non-finite results.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File system failures in the runner.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Config text that does not follow the grammar. Carries a 1-based position.
class ParseError : public InvalidArgument {
 public:
  ParseError(int line, int column, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace zenospin
