#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abreu {

enum class ErrorKind {
  InvalidDomain,
  EmptyGrid,
  IncompleteData,
  NonConvergence,
  ConvexityFailure,
  DegenerateOperator,
  LinearSolve,
  InvalidState,
  InvalidInput,
  TooCloseToBoundary,
  DegenerateSection,
  OutOfDomain,
  InsufficientResolution,
  ConvexityViolation,
  NonConvexProfile,
  InvalidShear,
  InsufficientData,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Base of every error raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Newton / outer-loop failure. Keeps the residual (or update) history so
// callers can report how far the iteration got.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, std::vector<double> history);

  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

// Indefinite or singular coefficient matrix at a specific node.
class DegenerateOperatorError : public Error {
 public:
  DegenerateOperatorError(const std::string& message, int node);

  int node() const noexcept { return node_; }

 private:
  int node_;
};

}  // namespace abreu
