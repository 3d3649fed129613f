#pragma once

// Positive operators on the one-particle space and their functional calculus.
//
// An OperatorSpec is either a finite Hermitian matrix (with a cached
// eigendecomposition, so vector-level formulas can be evaluated) or a list of
// spectral atoms whose multiplicities may be infinite. The second form keeps
// statements about infinite-dimensional spaces (trace-class questions,
// unbounded generators) computable from spectral data alone.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace weylscale {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kSpectralMergeTolerance = 1e-12;

class Multiplicity {
 public:
  static Multiplicity finite(std::size_t count);
  static Multiplicity infinite() { return Multiplicity(); }

  bool is_infinite() const noexcept { return !count_.has_value(); }
  // Throws OutOfRange on an infinite multiplicity.
  std::size_t count() const;

  Multiplicity operator+(const Multiplicity& other) const;
  bool operator==(const Multiplicity&) const = default;

 private:
  Multiplicity() = default;
  std::optional<std::size_t> count_;
};

struct SpectralAtom {
  double value;
  Multiplicity multiplicity;

  bool operator==(const SpectralAtom&) const = default;
};

// Non-attained spectral limit points. `upper` may be +infinity, which marks an
// operator unbounded above (e.g. a one-particle Hamiltonian); `lower` records
// a declared infimum such as inf spec(A) = 1 for covariances built from an
// unbounded Hamiltonian.
struct SpectralLimits {
  std::optional<double> lower;
  std::optional<double> upper;

  bool operator==(const SpectralLimits&) const = default;
};

enum class Monotonicity { Increasing, Decreasing, None };

// A named scalar map used by the functional calculus. `at_infinity` is the
// limit of the map as its argument goes to +infinity, needed only when the
// operator is unbounded above.
struct ScalarMap {
  std::string name;
  std::function<double(double)> fn;
  Monotonicity monotonicity = Monotonicity::None;
  std::optional<double> at_infinity;

  double operator()(double x) const { return fn(x); }

  static ScalarMap power(double exponent);
  static ScalarMap exp();
  static ScalarMap log();
  static ScalarMap scale(double factor);
  // lambda -> (lambda + 1) / (lambda - 1)
  static ScalarMap cayley();
  // lambda -> ((lambda + 1) / (lambda - 1))^(1 / beta)
  static ScalarMap modular(double beta);
  // lambda -> (1 + e^{-beta lambda}) / (1 - e^{-beta lambda})
  static ScalarMap thermal_covariance(double beta);
  static ScalarMap compose(const ScalarMap& outer, const ScalarMap& inner);
};

struct Interval {
  double lower;
  double upper;
  bool lower_closed;
  bool upper_closed;

  static Interval open_closed(double lower, double upper) { return {lower, upper, false, true}; }
  static Interval closed_open(double lower, double upper) { return {lower, upper, true, false}; }
  static Interval closed(double lower, double upper) { return {lower, upper, true, true}; }

  // Exact comparisons: no tolerance at the endpoints.
  bool contains(double x) const;
};

class OperatorSpec {
 public:
  enum class Variant { Matrix, Spectral };

  // Throws NonHermitian when the conjugate-symmetry residual exceeds
  // kHermitianTolerance (relative to max(1, max |entry|)).
  static OperatorSpec from_matrix(const Matrix& entries);
  static OperatorSpec diagonal(const std::vector<double>& values);
  // Throws NonPositiveAtom for atom values <= 0.
  static OperatorSpec from_atoms(std::vector<SpectralAtom> atoms, SpectralLimits limits = {});
  static OperatorSpec identity_atoms() {
    return from_atoms({{1.0, Multiplicity::infinite()}});
  }

  Variant variant() const noexcept { return variant_; }
  bool is_matrix() const noexcept { return variant_ == Variant::Matrix; }
  // Matrix dimension; throws SpectralVariantHasNoVectors for the atom form.
  std::size_t dimension() const;

  const Matrix& matrix() const;
  // Sorted ascending, canonicalized (values within kSpectralMergeTolerance coincide).
  const RealVector& eigenvalues() const;
  // Columns are orthonormal eigenvectors, aligned with eigenvalues().
  const Matrix& eigenvectors() const;

  // Distinct spectral values with multiplicities, ascending. Available for both variants.
  const std::vector<SpectralAtom>& atoms() const noexcept { return atoms_; }
  const SpectralLimits& limits() const noexcept { return limits_; }

 private:
  friend OperatorSpec apply_function(const OperatorSpec&, const ScalarMap&);
  friend OperatorSpec from_eigensystem(RealVector values, Matrix vectors);

  OperatorSpec() = default;

  Variant variant_ = Variant::Spectral;
  Matrix matrix_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  std::vector<SpectralAtom> atoms_;
  SpectralLimits limits_;
};

// Builds the Matrix variant V diag(values) V* without re-diagonalizing.
OperatorSpec from_eigensystem(RealVector values, Matrix vectors);

OperatorSpec make_operator(const Matrix& entries);
OperatorSpec make_operator(std::vector<SpectralAtom> atoms, SpectralLimits limits = {});

// Same eigenvectors, mapped spectrum. Throws DomainViolation when the map is
// not finite at a spectral point.
OperatorSpec apply_function(const OperatorSpec& op, const ScalarMap& fn);

double inf_spectrum(const OperatorSpec& op);
// +infinity when the spectrum is unbounded above.
double op_norm(const OperatorSpec& op);

// True iff sum over the spectrum of multiplicity * (lambda - 1) converges.
// Throws SpectrumBelowOne.
bool is_trace_class_minus_identity(const OperatorSpec& op);

struct ProjectionSpec {
  OperatorSpec source;
  Interval interval;
  std::vector<SpectralAtom> atoms;       // selected part of the spectrum
  std::vector<std::size_t> indices;      // Matrix variant: selected eigen-indices
  Matrix basis;                          // Matrix variant: n x k orthonormal columns
  Matrix projector;                      // Matrix variant: n x n

  bool empty() const noexcept { return atoms.empty(); }
  // Finite rank or nullopt when an infinite multiplicity was selected.
  std::optional<std::size_t> rank() const;
  // Residual ||f - E f|| (Matrix variant).
  double membership_residual(const Vector& f) const;
};

// Never throws; an empty selection is allowed.
ProjectionSpec spectral_projection(const OperatorSpec& op, const Interval& interval);

// <f, op g>, conjugate-linear in f.
Complex quadratic_form(const OperatorSpec& op, const Vector& f, const Vector& g);

// V diag(lambda^w) V* with the principal real logarithm of lambda > 0.
Matrix complex_power(const OperatorSpec& op, Complex exponent);

// Largest |lambda_a - lambda_b| over aligned atoms, +infinity when the atom
// structures differ (count or multiplicities).
double spectral_distance(const OperatorSpec& a, const OperatorSpec& b);

}  // namespace weylscale
