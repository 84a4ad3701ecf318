#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace singlab {

enum class ErrorCode {
  ContractViolation,
  DomainError,
  DegenerateSegment,
  NotPerfectFit,
  LoopHitsSingularity,
  Inconclusive,
  UnsupportedFeature,
  Unsupported,
  CurveHitsSingularity,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace singlab
