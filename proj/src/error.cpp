#include "f0mc/error.hpp"

namespace f0mc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kWidthMismatch: return "width mismatch";
    case ErrorCode::kModulusMismatch: return "modulus mismatch";
    case ErrorCode::kUnsupportedHash: return "unsupported hash";
    case ErrorCode::kBruteForceCap: return "brute-force cap exceeded";
    case ErrorCode::kOracleCap: return "oracle cap exceeded";
    case ErrorCode::kRTooSmall: return "r too small";
    case ErrorCode::kPathologicalHash: return "pathological hash";
    case ErrorCode::kUnsatisfiable: return "unsatisfiable formula";
    case ErrorCode::kOracleUnavailable: return "oracle unavailable";
    case ErrorCode::kOracleBudget: return "oracle budget exhausted";
  }
  return "unknown error";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kWidthMismatch:
    case ErrorCode::kModulusMismatch:
    case ErrorCode::kUnsupportedHash:
    case ErrorCode::kBruteForceCap:
    case ErrorCode::kOracleCap:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace f0mc
