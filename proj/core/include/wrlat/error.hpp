#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wrlat {

enum class ErrorKind {
  NotPrime,
  EvenOrTwo,
  BadConductor,
  MissingDerivedData,
  FieldMismatch,
  PrecisionLoss,
  InconsistentTraces,
  WrongCase,
  BadParams,
  BadIndex,
  VerificationFailed,
  NotFound,
  UnsupportedFamily,
  NotApplicable,
  DimensionTooLarge,
  NotPositiveDefinite,
  AlphaRational,
  Overflow,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the ErrorKind codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wrlat
