#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace duomagma {

enum class ErrorCode {
  UnitLawViolation,
  UnknownSymbol,
  ShapeMismatch,
  NonInvertibleMatrix,
  BadBreakpoints,
  NotAHomomorphism,
  BadInterval,
  NotUnitNeighborhood,
  NotInHM0,
  NoInverse,
  NormalizationError,
  AbsorptionFailed,
  NotPrimitive,
  BudgetExhausted,
  DimensionTooSmall,
  MalformedCertificate,
  InstanceTooLarge,
  UnknownKind,
  SchemaError,
  BadSqueezeMap,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace duomagma
