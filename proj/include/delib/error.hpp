#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace delib {

enum class ErrorCode {
  NotFound,
  Forbidden,
  Conflict,
  TriangleViolation,
  GridViolation,
  PhaseError,
  Blocked,
  Invalid,
  SelfEdge,
  CorruptLog,
  VersionError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the engine carries one of the codes above; the
/// service layer maps codes to HTTP statuses, the CLI maps them to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long long deficit = 0)
      : std::runtime_error(message), code_(code), deficit_(deficit) {}

  ErrorCode code() const noexcept { return code_; }
  /// Outstanding requested actions; meaningful for Blocked only.
  long long deficit() const noexcept { return deficit_; }

 private:
  ErrorCode code_;
  long long deficit_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace delib
