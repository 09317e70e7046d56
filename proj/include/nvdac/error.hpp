#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nvdac {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition or type invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Measured data that no admissible model parameter can reproduce.
class InconsistentInput : public Error {
 public:
  using Error::Error;
};

/// A root bracket or other numerical domain requirement failed.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative fit stopped without meeting its convergence test.
/// Carries the best parameters seen so the caller can still report them.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, std::vector<double> best)
      : Error(what), best_(std::move(best)) {}
  const std::vector<double>& best_effort() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

/// Malformed input file; line() is 1-based, 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nvdac
