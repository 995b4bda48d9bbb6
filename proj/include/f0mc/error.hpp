#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace f0mc {

/// Every failure raised by the library carries one of these codes. The CLI
/// maps input errors to exit status 2 and algorithmic errors to exit status 3.
enum class ErrorCode {
  // input errors
  kParse,
  kInvalidArgument,
  kWidthMismatch,
  kModulusMismatch,
  kUnsupportedHash,
  kBruteForceCap,
  kOracleCap,
  // algorithmic errors
  kRTooSmall,
  kPathologicalHash,
  kUnsatisfiable,
  kOracleUnavailable,
  kOracleBudget,
};

std::string_view error_code_name(ErrorCode code);
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace f0mc
