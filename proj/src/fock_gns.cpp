#include "weylscale/fock_gns.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <unsupported/Eigen/KroneckerProduct>

#include "weylscale/error.hpp"

namespace weylscale {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < kMinCutoff) {
    throw Error(ErrorKind::CutoffTooSmall,
                "cutoff " + std::to_string(cutoff) + " below the floor " +
                    std::to_string(kMinCutoff));
  }
}

std::size_t checked_dimension(int levels, std::size_t slots) {
  double dim = std::pow(static_cast<double>(levels), static_cast<double>(slots));
  if (dim > static_cast<double>(kMaxFockDimension)) {
    throw Error(ErrorKind::TruncationTooLarge,
                "truncated space of dimension " + std::to_string(static_cast<long long>(dim)) +
                    " exceeds " + std::to_string(kMaxFockDimension));
  }
  return static_cast<std::size_t>(dim);
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) {
    Matrix next = Eigen::kroneckerProduct(out, f).eval();
    out = std::move(next);
  }
  return out;
}

// I (x) ... (x) op (x) ... (x) I with op on `slot`.
Matrix embed(const Matrix& op, std::size_t slot, std::size_t slots, int cutoff) {
  const auto levels = static_cast<Eigen::Index>(cutoff + 1);
  std::vector<Matrix> factors(slots, Matrix::Identity(levels, levels));
  factors[slot] = op;
  return kron_all(factors);
}

Matrix matrix_sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
  RealVector values = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * values.cast<Complex>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

// Slot amplitudes for W_x (x) W_y.
FactoredOperator doubled_weyl(const Vector& x, const Vector& y, int cutoff) {
  FactoredOperator op{cutoff, {}};
  const Vector ax = weyl_amplitudes(x);
  const Vector ay = weyl_amplitudes(y);
  for (Eigen::Index k = 0; k < ax.size(); ++k) {
    op.slots.push_back(single_mode_displacement(ax[k], cutoff));
  }
  for (Eigen::Index k = 0; k < ay.size(); ++k) {
    op.slots.push_back(single_mode_displacement(ay[k], cutoff));
  }
  return op;
}

void require_model_vector(const GnsModel& model, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != model.modes()) {
    throw Error(ErrorKind::DimensionMismatch, "vector does not match the GNS model's modes");
  }
}

// Per-slot field amplitudes x with Phi_omega(f) = sum_s Phi_0(x_s) on slot s.
Vector slot_field_amplitudes(const GnsModel& model, const Vector& f) {
  const auto n = static_cast<Eigen::Index>(model.modes());
  Vector x(2 * n);
  x.head(n) = model.t1() * f;
  x.tail(n) = (model.t2() * f).conjugate();
  return x;
}

}  // namespace

Matrix truncated_annihilation(int cutoff) {
  const auto levels = static_cast<Eigen::Index>(cutoff + 1);
  Matrix a = Matrix::Zero(levels, levels);
  for (Eigen::Index n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix single_mode_displacement(Complex alpha, int cutoff) {
  require_cutoff(cutoff);
  const auto levels = static_cast<Eigen::Index>(cutoff + 1);
  if (alpha == Complex(0.0)) return Matrix::Identity(levels, levels);
  const Matrix a = truncated_annihilation(cutoff);
  // D = exp(G) with G = alpha a* - conj(alpha) a anti-Hermitian; H = iG is Hermitian.
  const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const Matrix hermitian = Complex(0.0, 1.0) * generator;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (hermitian + hermitian.adjoint()));
  Vector phases(levels);
  for (Eigen::Index k = 0; k < levels; ++k) {
    phases[k] = std::exp(Complex(0.0, -solver.eigenvalues()[k]));
  }
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Vector weyl_amplitudes(const Vector& f) { return Complex(0.0, 1.0 / std::sqrt(2.0)) * f; }

TruncatedFockOp truncated_displacement(const Vector& alpha, int cutoff) {
  require_cutoff(cutoff);
  const auto modes = static_cast<std::size_t>(alpha.size());
  checked_dimension(cutoff + 1, modes);
  FactoredOperator factored{cutoff, {}};
  double max_alpha2 = 0.0;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    factored.slots.push_back(single_mode_displacement(alpha[k], cutoff));
    max_alpha2 = std::max(max_alpha2, std::norm(alpha[k]));
  }
  TruncatedFockOp op{FockOpRole::Displacement, cutoff, modes, factored.dense(), 0.0, false};
  op.unitarity_defect = factored.unitarity_defect();
  op.below_recommended_cutoff = cutoff < 8.0 * std::max(1.0, max_alpha2);
  return op;
}

FactoredOperator FactoredOperator::operator*(const FactoredOperator& other) const {
  if (slots.size() != other.slots.size() || cutoff != other.cutoff) {
    throw Error(ErrorKind::DimensionMismatch, "factored operators on different spaces");
  }
  FactoredOperator out{cutoff, {}};
  out.slots.reserve(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) out.slots.push_back(slots[s] * other.slots[s]);
  return out;
}

Complex FactoredOperator::vacuum_element() const {
  Complex acc = 1.0;
  for (const auto& s : slots) acc *= s(0, 0);
  return acc;
}

Matrix FactoredOperator::dense_block(int max_occupation) const {
  const int top = std::min(max_occupation, cutoff);
  checked_dimension(top + 1, slots.size());
  std::vector<Matrix> blocks;
  blocks.reserve(slots.size());
  for (const auto& s : slots) blocks.push_back(s.topLeftCorner(top + 1, top + 1));
  return kron_all(blocks);
}

double FactoredOperator::unitarity_defect() const {
  // For a tensor product, U*U - I is small iff every factor is nearly unitary;
  // the factor defects bound the full defect to first order.
  double worst = 0.0;
  for (const auto& s : slots) {
    const Matrix defect = s.adjoint() * s - Matrix::Identity(s.rows(), s.cols());
    worst += defect.cwiseAbs().maxCoeff();
  }
  return worst;
}

GnsModel::GnsModel(const OperatorSpec& covariance, int cutoff)
    : covariance_(covariance), cutoff_(cutoff) {
  require_cutoff(cutoff);
  if (!covariance_.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "GNS model needs a matrix covariance");
  }
  if (inf_spectrum(covariance_) < 1.0 - 1e-12) {
    throw Error(ErrorKind::CovarianceBelowIdentity, "GNS model needs A >= I");
  }
  const auto n = static_cast<Eigen::Index>(covariance_.dimension());
  const Matrix& a = covariance_.matrix();
  const Matrix id = Matrix::Identity(n, n);
  t1_ = matrix_sqrt_psd(0.5 * (a + id));
  t2_ = matrix_sqrt_psd(0.5 * (a - id));
}

FactoredOperator gns_weyl_operator(const GnsModel& model, const Vector& f) {
  require_model_vector(model, f);
  return doubled_weyl(model.t1() * f, (model.t2() * f).conjugate(), model.cutoff());
}

FactoredOperator commutant_weyl_operator(const GnsModel& model, const Vector& g) {
  require_model_vector(model, g);
  return doubled_weyl(model.t2() * g, (model.t1() * g).conjugate(), model.cutoff());
}

Complex gns_expectation(const GnsModel& model, const WeylWord& u) {
  if (u.dimension() != model.modes()) {
    throw Error(ErrorKind::DimensionMismatch, "word does not match the GNS model's modes");
  }
  Complex acc = 0.0;
  for (const auto& t : u.terms()) {
    acc += t.coefficient * gns_weyl_operator(model, t.vector).vacuum_element();
  }
  return acc;
}

Complex gns_expectation(const GnsModel& model, std::span<const WeylWord> factors) {
  for (const auto& w : factors) {
    if (w.dimension() != model.modes()) {
      throw Error(ErrorKind::DimensionMismatch, "word does not match the GNS model's modes");
    }
  }
  if (factors.empty()) return 1.0;
  // Expand the product term by term, keeping every generator as a matrix.
  Complex total = 0.0;
  std::function<void(std::size_t, const FactoredOperator&, Complex)> expand =
      [&](std::size_t depth, const FactoredOperator& acc, Complex coeff) {
        if (depth == factors.size()) {
          total += coeff * acc.vacuum_element();
          return;
        }
        for (const auto& t : factors[depth].terms()) {
          expand(depth + 1, acc * gns_weyl_operator(model, t.vector), coeff * t.coefficient);
        }
      };
  const auto levels = static_cast<Eigen::Index>(model.cutoff() + 1);
  FactoredOperator unit{model.cutoff(),
                        std::vector<Matrix>(2 * model.modes(), Matrix::Identity(levels, levels))};
  expand(0, unit, 1.0);
  return total;
}

double weyl_relation_residual(const GnsModel& model, const Vector& f, const Vector& g) {
  const FactoredOperator product = gns_weyl_operator(model, f) * gns_weyl_operator(model, g);
  const FactoredOperator sum = gns_weyl_operator(model, f + g);
  const Complex phase = std::exp(Complex(0.0, -0.5 * symplectic_form(f, g)));
  const int m = model.trusted_occupation();
  return (product.dense_block(m) - phase * sum.dense_block(m)).cwiseAbs().maxCoeff();
}

double commutant_residual(const GnsModel& model, const Vector& f, const Vector& g) {
  const FactoredOperator x = gns_weyl_operator(model, f);
  const FactoredOperator y = commutant_weyl_operator(model, g);
  const int m = model.trusted_occupation();
  return ((x * y).dense_block(m) - (y * x).dense_block(m)).cwiseAbs().maxCoeff();
}

TruncatedFockOp gns_field_operator(const GnsModel& model, const Vector& f) {
  require_model_vector(model, f);
  const std::size_t slots = 2 * model.modes();
  const std::size_t dim = checked_dimension(model.cutoff() + 1, slots);
  const Matrix a = truncated_annihilation(model.cutoff());
  const Vector x = slot_field_amplitudes(model, f);
  Matrix field = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < slots; ++s) {
    const Complex xs = x[static_cast<Eigen::Index>(s)];
    if (xs == Complex(0.0)) continue;
    const Matrix local = (xs * a.adjoint() + std::conj(xs) * a) / std::sqrt(2.0);
    field += embed(local, s, slots, model.cutoff());
  }
  return {FockOpRole::Field, model.cutoff(), model.modes(), std::move(field), 0.0, false};
}

TruncatedFockOp gns_annihilation_operator(const GnsModel& model, const Vector& f) {
  const Complex i(0.0, 1.0);
  TruncatedFockOp op = gns_field_operator(model, f);
  const Matrix field_if = gns_field_operator(model, i * f).matrix;
  op.matrix = (op.matrix + i * field_if) / std::sqrt(2.0);
  op.role = FockOpRole::Annihilation;
  return op;
}

TruncatedFockOp gns_creation_operator(const GnsModel& model, const Vector& f) {
  const Complex i(0.0, 1.0);
  TruncatedFockOp op = gns_field_operator(model, f);
  const Matrix field_if = gns_field_operator(model, i * f).matrix;
  op.matrix = (op.matrix - i * field_if) / std::sqrt(2.0);
  op.role = FockOpRole::Creation;
  return op;
}

TruncatedFockOp gns_number_operator(const GnsModel& model, const Vector& f) {
  TruncatedFockOp create = gns_creation_operator(model, f);
  const TruncatedFockOp annihilate = gns_annihilation_operator(model, f);
  create.matrix = create.matrix * annihilate.matrix;
  create.role = FockOpRole::Number;
  return create;
}

double gns_number_expectation(const GnsModel& model, const Vector& f) {
  const TruncatedFockOp annihilate = gns_annihilation_operator(model, f);
  // Omega is the first basis vector of the doubled space.
  return annihilate.matrix.col(0).squaredNorm();
}

double one_particle_number_expectation(const OperatorSpec& a, const Vector& f) {
  if (inf_spectrum(a) < 1.0 - 1e-12) {
    throw Error(ErrorKind::SpectrumBelowOne, "number expectation needs A >= I");
  }
  return 0.5 * (quadratic_form(a, f, f).real() - f.squaredNorm());
}

bool is_quasi_equivalent_to_fock(const OperatorSpec& a) { return is_trace_class_minus_identity(a); }

OperatorSpec rescaled_fock_covariance(double h, std::size_t dim) {
  if (!(h > 0)) throw Error(ErrorKind::NonPositiveScale, "rescaled Fock covariance needs h > 0");
  return OperatorSpec::diagonal(std::vector<double>(dim, 1.0 / h));
}

OperatorSpec rescaled_fock_spectral(double h) {
  if (!(h > 0)) throw Error(ErrorKind::NonPositiveScale, "rescaled Fock covariance needs h > 0");
  return OperatorSpec::from_atoms({{1.0 / h, Multiplicity::infinite()}});
}

double c_parameter(double h) {
  if (!(h > 0.0 && h <= 1.0)) throw Error(ErrorKind::OutOfRange, "c_parameter needs h in (0, 1]");
  return (1.0 - h) / (1.0 + h);
}

double h_of_c(double c) {
  if (!(c >= 0.0 && c < 1.0)) throw Error(ErrorKind::OutOfRange, "h_of_c needs c in [0, 1)");
  return (1.0 - c) / (1.0 + c);
}

StateFunctional universally_invariant_functional(const MixtureMeasure& measure) {
  return StateFunctional(StateFunctional::Mixture{measure});
}

UnitaryMap::UnitaryMap(Matrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw Error(ErrorKind::NonUnitary, "unitary must be square");
  const Matrix defect = u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorKind::NonUnitary, "U* U deviates from the identity");
  }
}

Vector UnitaryMap::operator()(const Vector& f) const {
  if (f.size() != u_.cols()) throw Error(ErrorKind::DimensionMismatch, "unitary map argument");
  return u_ * f;
}

double check_universal_invariance(const StateFunctional& phi, const UnitaryMap& u,
                                  const std::vector<Vector>& vectors) {
  double worst = 0.0;
  for (const auto& f : vectors) worst = std::max(worst, std::abs(phi(u(f)) - phi(f)));
  return worst;
}

}  // namespace weylscale
