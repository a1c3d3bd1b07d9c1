#pragma once

#include <stdexcept>
#include <string>

namespace tsrlab {

// Fine-grained error identities; the C boundary collapses them to coarse
// status codes (see capi.cpp).
enum class ErrorCode {
  Io,
  NonRectangular,
  UnknownCharacter,
  WrongStartCount,
  WrongGoalCount,
  LayoutUnreachable,
  InvalidState,
  InvalidAction,
  EmptyInput,
  InvalidEpsilon,
  ShapeMismatch,
  EmptyTrace,
  IndexOutOfRange,
  LengthMismatch,
  SingularSystem,
  ConfigInvalid,
  InvalidArgument,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tsrlab
