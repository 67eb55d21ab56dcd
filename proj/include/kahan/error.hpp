#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kahan {

enum class ErrorCode {
  DenominatorVanished,
  DivisionUndefined,
  UnboundVariable,
  NotLinear,
  DegreeTooHigh,
  InvalidSystem,
  SingularMatrix,
  ZeroDeterminant,
  SingularStep,
  NotFixedPoint,
  NoConvergence,
  CofactorMismatch,
  AffineConstraintViolated,
  NoRealFixedPoint,
  SymbolicParameters,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

/// All library failures carry one of the codes above so callers can branch
/// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Singular numeric step; carries a condition estimate (infinity when exact zero).
class SingularStepError : public Error {
 public:
  SingularStepError(const std::string& what, double condition)
      : Error(ErrorCode::SingularStep, what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Text parse failure with a 1-based line (0 when the input is a single expression).
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& reason)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + reason),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace kahan
