#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace definetti {

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  IndexOutOfRange,
  NotClassical,
  SymmetryViolation,
  SupportViolation,
  NonFreeGame,
  BracketError,
  BudgetExceeded,
  IterationLimit,
};

std::string_view to_string(ErrorKind kind);

// Process exit code used by the command line tool.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace definetti
