#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weylscale {

enum class ErrorKind {
  NonHermitian,
  NonPositiveAtom,
  DomainViolation,
  SpectrumBelowOne,
  DimensionMismatch,
  SpectralVariantHasNoVectors,
  NonPositiveScale,
  CovarianceBelowIdentity,
  CutoffTooSmall,
  TruncationTooLarge,
  OutOfRange,
  InvalidMeasure,
  NonUnitary,
  NonPositiveHamiltonian,
  NonPositiveBeta,
  OutsideStrip,
  ScaleOutOfRange,
  ModelMismatch,
  VectorOutsideSubspace,
  ConfigInvalid,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (tests, the experiment runner) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace weylscale
