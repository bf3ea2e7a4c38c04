#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hs {

enum class ErrorCode {
  ZeroState,
  WindowTooSmall,
  EdgeSpill,
  NotUnitary,
  WindowMissesBlock,
  BadBand,
  NotHermitian,
  QuadratureUnconverged,
  WindowMismatch,
  EmptySupport,
  BudgetInfeasible,
  BadDim,
  BadParams,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and reports) can name the violated condition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hs
