#include "weylscale/error.hpp"

namespace weylscale {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonPositiveAtom: return "NonPositiveAtom";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SpectrumBelowOne: return "SpectrumBelowOne";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SpectralVariantHasNoVectors: return "SpectralVariantHasNoVectors";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::CovarianceBelowIdentity: return "CovarianceBelowIdentity";
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::TruncationTooLarge: return "TruncationTooLarge";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NonPositiveHamiltonian: return "NonPositiveHamiltonian";
    case ErrorKind::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorKind::OutsideStrip: return "OutsideStrip";
    case ErrorKind::ScaleOutOfRange: return "ScaleOutOfRange";
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::VectorOutsideSubspace: return "VectorOutsideSubspace";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace weylscale
