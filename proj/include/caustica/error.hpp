#pragma once

#include <stdexcept>
#include <string>

namespace caustica {

enum class ErrorCode {
  ZeroVector,
  NotInPencil,
  NotConcurrent,
  DegenerateQuadruple,
  DegeneratePencil,
  DegenerateConic,
  SingularMap,
  CoincidentEigenlines,
  DegenerateRestriction,
  TangentLine,
  LineInConic,
  NotThroughPoint,
  SingularPoint,
  OffBoundary,
  SingularReflection,
  ZeroVelocity,
  InvalidCase,
  OnPolarLocus,
  ProportionalConics,
  NotHomogeneous,
  SingularParameter,
  SingularCurvePoint,
  SelfOrthogonalTangent,
  AlphaEqualsC,
  UnsupportedSignature,
  RankMismatch,
  NoConvergence,
  LiftDomainEmpty,
  OutsideDomain,
  ConfigError,
  IoError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace caustica
