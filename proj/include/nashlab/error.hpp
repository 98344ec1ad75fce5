#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nashlab {

enum class ErrorKind {
  SyntaxError,
  UnknownVariable,
  DimensionMismatch,
  BasePointNotOnVariety,
  ZeroPolynomial,
  RankDeficient,
  UnsupportedSpec,
  DegenerateFiber,
  NonTransversalProjection,
  InconsistentParity,
  BranchPairingAmbiguous,
  SingularPoint,
  NotOnVariety,
  NotInjective,
  SingleBranch,
  InsufficientScales,
  ScaleTooLarge,
  DerivativeBoundViolated,
  DerivativeVanishes,
  DomainViolation,
  InputError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type; callers
// dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorKind::SyntaxError, "at offset " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace nashlab
