#include "definetti/errors.hpp"

namespace definetti {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotClassical: return "NotClassical";
    case ErrorKind::SymmetryViolation: return "SymmetryViolation";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::NonFreeGame: return "NonFreeGame";
    case ErrorKind::BracketError: return "BracketError";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BudgetExceeded: return 3;
    case ErrorKind::IterationLimit: return 4;
    default: return 2;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace definetti
