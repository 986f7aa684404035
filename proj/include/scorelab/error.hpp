#pragma once

#include <stdexcept>
#include <string>

namespace scorelab {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  DomainError,
  DegenerateWeight,
  NoBracket,
  Unsupported,
  InverseMismatch,
  MixedFunctionals,
  NoClosedForm,
  KinkTooClose,
  ConstraintViolated,
  Cancelled,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto an exit status.
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

}  // namespace scorelab
