#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace predlab {

enum class ErrorCode {
  PoleOutOfRegion,
  DegreeViolation,
  NonConjugateSymmetric,
  NumericalDegeneracy,
  QuadratureNotConverged,
  DomainError,
  Saturated,
  TruncationNotJustified,
  SpectrumNotDecayed,
  SaturatedSpectrum,
  SupportViolation,
  ClassConstraintViolation,
  GridMismatch,
  InsufficientHistory,
  ClassMismatch,
  MonotonicityViolation,
  BoundViolation,
  NoGrowthDetected,
  InvalidArgument,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace predlab
