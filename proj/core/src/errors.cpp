#include "singlab/errors.hpp"

namespace singlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ContractViolation: return "CONTRACT_VIOLATION";
    case ErrorCode::DomainError: return "DOMAIN_ERROR";
    case ErrorCode::DegenerateSegment: return "DEGENERATE_SEGMENT";
    case ErrorCode::NotPerfectFit: return "NOT_PERFECT_FIT";
    case ErrorCode::LoopHitsSingularity: return "LOOP_HITS_SINGULARITY";
    case ErrorCode::Inconclusive: return "INCONCLUSIVE";
    case ErrorCode::UnsupportedFeature: return "UNSUPPORTED_FEATURE";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::CurveHitsSingularity: return "CURVE_HITS_SINGULARITY";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace singlab
