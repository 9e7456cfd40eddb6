#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roydennet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (files, parameters). The CLI maps
/// these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A numerical procedure failed to reach its stopping criterion.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double final_residual)
      : Error(what), final_residual_(final_residual) {}

  double final_residual() const noexcept { return final_residual_; }

 private:
  double final_residual_;
};

}  // namespace roydennet
