#include "hs/errors.hpp"

namespace hs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::EdgeSpill: return "EdgeSpill";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::WindowMissesBlock: return "WindowMissesBlock";
    case ErrorCode::BadBand: return "BadBand";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::QuadratureUnconverged: return "QuadratureUnconverged";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::BudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::BadDim: return "BadDim";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace hs
