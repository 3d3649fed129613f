#pragma once

// Truncated Fock-space realization of the GNS representation of a quasi-free
// state, plus the rescaled-Fock and gauge-invariant state families.
//
// Conventions. On Fock space over C^n the Weyl generator W_x is the displacement
// D(alpha) = exp(alpha a* - conj(alpha) a) with alpha = i x / sqrt(2) per mode,
// i.e. W_x = exp(i Phi(x)) with Phi(x) = (a*(x) + a(x)) / sqrt(2). This gives
// <0|W_x|0> = exp(-|x|^2/4) and W_x W_y = exp(-(i/2) Im<x,y>) W_{x+y}.
//
// The doubled representation is
//   pi(W_f)       = W_{T1 f} (x) W_{conj(T2 f)}
//   pi_tilde(W_g) = W_{T2 g} (x) W_{conj(T1 g)}
// with T1 = ((A+I)/2)^{1/2}, T2 = ((A-I)/2)^{1/2} and conj the complex
// conjugation in the computational basis. The conjugation on the second
// factor is what makes pi a representation of the sigma-algebra (the phases
// Im<f,(A+I)/2 g> - Im<f,(A-I)/2 g> add up to Im<f,g>) and makes pi_tilde
// commute with pi.

#include <cstddef>
#include <span>
#include <vector>

#include "weylscale/spectral.hpp"
#include "weylscale/state.hpp"
#include "weylscale/weyl_word.hpp"

namespace weylscale {

// Largest dense axis (number of basis states) any truncated operator may have.
inline constexpr std::size_t kMaxFockDimension = 10000;
inline constexpr int kMinCutoff = 4;

enum class FockOpRole { Displacement, Field, Annihilation, Creation, Number };

struct TruncatedFockOp {
  FockOpRole role;
  int cutoff;           // occupation numbers 0..cutoff per mode
  std::size_t modes;
  Matrix matrix;
  double unitarity_defect = 0.0;        // ||M* M - I||_max; displacements only
  bool below_recommended_cutoff = false;
};

// Single-mode truncated annihilation operator (cutoff + 1 levels).
Matrix truncated_annihilation(int cutoff);

// exp(alpha a* - conj(alpha) a) built from the truncated generator; exactly
// unitary up to rounding. Throws CutoffTooSmall for cutoff < kMinCutoff.
Matrix single_mode_displacement(Complex alpha, int cutoff);

// Tensor product of single-mode displacements, one amplitude per mode.
// Flags cutoffs below 8 max(1, |alpha|^2). Throws CutoffTooSmall, TruncationTooLarge.
TruncatedFockOp truncated_displacement(const Vector& alpha, int cutoff);

// alpha = i f / sqrt(2), the amplitudes realizing W_f.
Vector weyl_amplitudes(const Vector& f);

// An operator on a tensor product of single-mode slots, stored factor by factor.
struct FactoredOperator {
  int cutoff;
  std::vector<Matrix> slots;

  FactoredOperator operator*(const FactoredOperator& other) const;
  // Product of the slot vacuum elements, i.e. <Omega, X Omega>.
  Complex vacuum_element() const;
  // Dense Kronecker product restricted to occupations <= max_occupation per
  // slot. Throws TruncationTooLarge beyond kMaxFockDimension.
  Matrix dense_block(int max_occupation) const;
  Matrix dense() const { return dense_block(cutoff); }
  double unitarity_defect() const;
};

class GnsModel {
 public:
  // Requires a Matrix covariance with A >= I (CovarianceBelowIdentity) and
  // cutoff >= kMinCutoff (CutoffTooSmall).
  GnsModel(const OperatorSpec& covariance, int cutoff);

  const OperatorSpec& covariance() const noexcept { return covariance_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t modes() const noexcept { return covariance_.dimension(); }
  const Matrix& t1() const noexcept { return t1_; }
  const Matrix& t2() const noexcept { return t2_; }
  // Occupation bound of the block on which truncated products are trusted.
  int trusted_occupation() const noexcept { return cutoff_ / 2; }

 private:
  OperatorSpec covariance_;
  int cutoff_;
  Matrix t1_;
  Matrix t2_;
};

FactoredOperator gns_weyl_operator(const GnsModel& model, const Vector& f);
FactoredOperator commutant_weyl_operator(const GnsModel& model, const Vector& g);

// <Omega, pi(u) Omega>.
Complex gns_expectation(const GnsModel& model, const WeylWord& u);
// <Omega, pi(u_1) pi(u_2) ... Omega>, multiplying truncated matrices (no Weyl
// rule is used), so it is an independent check of the symbolic product.
Complex gns_expectation(const GnsModel& model, std::span<const WeylWord> factors);

// ||pi(W_f) pi(W_g) - exp(-(i/2) sigma(f,g)) pi(W_{f+g})||_max on the trusted block.
double weyl_relation_residual(const GnsModel& model, const Vector& f, const Vector& g);

// ||[pi(W_f), pi_tilde(W_g)]||_max on the trusted block.
double commutant_residual(const GnsModel& model, const Vector& f, const Vector& g);

// Dense field, annihilation, creation and number operators of the GNS
// representation. Throws TruncationTooLarge beyond kMaxFockDimension.
TruncatedFockOp gns_field_operator(const GnsModel& model, const Vector& f);
TruncatedFockOp gns_annihilation_operator(const GnsModel& model, const Vector& f);
TruncatedFockOp gns_creation_operator(const GnsModel& model, const Vector& f);
TruncatedFockOp gns_number_operator(const GnsModel& model, const Vector& f);

// <Omega, N_f Omega> = ||a(f) Omega||^2 from the truncated annihilation operator.
double gns_number_expectation(const GnsModel& model, const Vector& f);

// (1/2) <f, (A - I) f>. Throws SpectrumBelowOne.
double one_particle_number_expectation(const OperatorSpec& a, const Vector& f);

// Quasi-equivalence with the Fock state, decided by A - I being trace class.
bool is_quasi_equivalent_to_fock(const OperatorSpec& a);

// Covariance of the rescaled Fock state: I / h on C^dim, or the atom (1/h, INF).
OperatorSpec rescaled_fock_covariance(double h, std::size_t dim);
OperatorSpec rescaled_fock_spectral(double h);

// c = (1 - h) / (1 + h) for h in (0, 1]; inverse for c in [0, 1). OutOfRange otherwise.
double c_parameter(double h);
double h_of_c(double c);

StateFunctional universally_invariant_functional(const MixtureMeasure& measure);

class UnitaryMap {
 public:
  // Throws NonUnitary when ||U* U - I||_max > 1e-10.
  explicit UnitaryMap(Matrix u);

  const Matrix& matrix() const noexcept { return u_; }
  Vector operator()(const Vector& f) const;

 private:
  Matrix u_;
};

// max_f |phi(U f) - phi(f)|.
double check_universal_invariance(const StateFunctional& phi, const UnitaryMap& u,
                                  const std::vector<Vector>& vectors);

}  // namespace weylscale
