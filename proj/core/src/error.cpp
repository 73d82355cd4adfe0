#include "abreu/error.hpp"

#include <utility>

namespace abreu {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDomain: return "invalid-domain";
    case ErrorKind::EmptyGrid: return "empty-grid";
    case ErrorKind::IncompleteData: return "incomplete-data";
    case ErrorKind::NonConvergence: return "nonconvergence";
    case ErrorKind::ConvexityFailure: return "convexity-failure";
    case ErrorKind::DegenerateOperator: return "degenerate-operator";
    case ErrorKind::LinearSolve: return "linear-solve";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::TooCloseToBoundary: return "too-close-to-boundary";
    case ErrorKind::DegenerateSection: return "degenerate-section";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::InsufficientResolution: return "insufficient-resolution";
    case ErrorKind::ConvexityViolation: return "convexity-violation";
    case ErrorKind::NonConvexProfile: return "non-convex-profile";
    case ErrorKind::InvalidShear: return "invalid-shear";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NonConvergenceError::NonConvergenceError(const std::string& message, std::vector<double> history)
    : Error(ErrorKind::NonConvergence, message), history_(std::move(history)) {}

DegenerateOperatorError::DegenerateOperatorError(const std::string& message, int node)
    : Error(ErrorKind::DegenerateOperator, message), node_(node) {}

}  // namespace abreu
