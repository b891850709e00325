#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksv {

enum class ErrorKind {
  NonHermitian,
  NonFinite,
  NotPSD,
  ShapeMismatch,
  SubmoduleViolation,
  SingularGram,
  TwistMismatch,
  NotCP,
  NonLinearMap,
  WellDefinednessViolation,
  ObjectMismatch,
  SpanningFailure,
  NonConvergentInput,
  ParseError,
  ValidationError,
  IoError,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ksv
