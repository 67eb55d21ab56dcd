#include "kahan/error.hpp"

namespace kahan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DenominatorVanished: return "DenominatorVanished";
    case ErrorCode::DivisionUndefined: return "DivisionUndefined";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NotLinear: return "NotLinear";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroDeterminant: return "ZeroDeterminant";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::NotFixedPoint: return "NotFixedPoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CofactorMismatch: return "CofactorMismatch";
    case ErrorCode::AffineConstraintViolated: return "AffineConstraintViolated";
    case ErrorCode::NoRealFixedPoint: return "NoRealFixedPoint";
    case ErrorCode::SymbolicParameters: return "SymbolicParameters";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace kahan
