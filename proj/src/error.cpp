#include "scorelab/error.hpp"

namespace scorelab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateWeight: return "DegenerateWeight";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InverseMismatch: return "InverseMismatch";
    case ErrorCode::MixedFunctionals: return "MixedFunctionals";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::KinkTooClose: return "KinkTooClose";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace scorelab
