#include "predlab/error.hpp"

namespace predlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PoleOutOfRegion: return "PoleOutOfRegion";
    case ErrorCode::DegreeViolation: return "DegreeViolation";
    case ErrorCode::NonConjugateSymmetric: return "NonConjugateSymmetric";
    case ErrorCode::NumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Saturated: return "Saturated";
    case ErrorCode::TruncationNotJustified: return "TruncationNotJustified";
    case ErrorCode::SpectrumNotDecayed: return "SpectrumNotDecayed";
    case ErrorCode::SaturatedSpectrum: return "SaturatedSpectrum";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::ClassConstraintViolation: return "ClassConstraintViolation";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::NoGrowthDetected: return "NoGrowthDetected";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace predlab
