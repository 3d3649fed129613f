#include "weylscale/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "weylscale/error.hpp"

namespace weylscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool within_merge_tolerance(double a, double b) {
  return std::abs(a - b) <= kSpectralMergeTolerance * std::max(1.0, std::abs(a));
}

// Sorts atoms ascending and merges neighbours closer than the merge tolerance.
std::vector<SpectralAtom> canonical_atoms(std::vector<SpectralAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const SpectralAtom& a, const SpectralAtom& b) { return a.value < b.value; });
  std::vector<SpectralAtom> merged;
  for (const auto& atom : atoms) {
    if (!merged.empty() && within_merge_tolerance(merged.back().value, atom.value)) {
      merged.back().multiplicity = merged.back().multiplicity + atom.multiplicity;
    } else {
      merged.push_back(atom);
    }
  }
  return merged;
}

// Snaps clustered eigenvalues to the first value of their cluster and derives atoms.
std::vector<SpectralAtom> canonicalize_eigenvalues(RealVector& values) {
  std::vector<SpectralAtom> atoms;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!atoms.empty() && within_merge_tolerance(atoms.back().value, values[i])) {
      values[i] = atoms.back().value;
      atoms.back().multiplicity = atoms.back().multiplicity + Multiplicity::finite(1);
    } else {
      atoms.push_back({values[i], Multiplicity::finite(1)});
    }
  }
  return atoms;
}

std::string format_value(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double map_checked(const ScalarMap& fn, double x) {
  const double y = fn(x);
  if (!std::isfinite(y)) {
    throw Error(ErrorKind::DomainViolation,
                fn.name + " is not finite at spectral value " + format_value(x));
  }
  return y;
}

// Image of a limit point; +infinity stands for "unbounded above".
double map_limit(const ScalarMap& fn, double x) {
  if (std::isinf(x)) {
    if (!fn.at_infinity) {
      throw Error(ErrorKind::DomainViolation, fn.name + " has no declared limit at infinity");
    }
    return *fn.at_infinity;
  }
  const double y = fn(x);
  if (std::isnan(y)) {
    throw Error(ErrorKind::DomainViolation,
                fn.name + " is undefined at limit point " + format_value(x));
  }
  return y;
}

}  // namespace

Multiplicity Multiplicity::finite(std::size_t count) {
  if (count == 0) throw Error(ErrorKind::OutOfRange, "multiplicity must be positive");
  Multiplicity m;
  m.count_ = count;
  return m;
}

std::size_t Multiplicity::count() const {
  if (!count_) throw Error(ErrorKind::OutOfRange, "infinite multiplicity has no count");
  return *count_;
}

Multiplicity Multiplicity::operator+(const Multiplicity& other) const {
  if (is_infinite() || other.is_infinite()) return infinite();
  return finite(*count_ + *other.count_);
}

ScalarMap ScalarMap::power(double exponent) {
  const Monotonicity mono = exponent > 0   ? Monotonicity::Increasing
                            : exponent < 0 ? Monotonicity::Decreasing
                                           : Monotonicity::None;
  return {"pow(" + format_value(exponent) + ")",
          [exponent](double x) { return x > 0 ? std::pow(x, exponent) : std::nan(""); }, mono,
          exponent > 0 ? kInf : 0.0};
}

ScalarMap ScalarMap::exp() {
  return {"exp", [](double x) { return std::exp(x); }, Monotonicity::Increasing, kInf};
}

ScalarMap ScalarMap::log() {
  return {"log", [](double x) { return x > 0 ? std::log(x) : std::nan(""); },
          Monotonicity::Increasing, kInf};
}

ScalarMap ScalarMap::scale(double factor) {
  const Monotonicity mono = factor > 0   ? Monotonicity::Increasing
                            : factor < 0 ? Monotonicity::Decreasing
                                         : Monotonicity::None;
  return {"scale(" + format_value(factor) + ")", [factor](double x) { return factor * x; }, mono,
          factor > 0 ? kInf : -kInf};
}

ScalarMap ScalarMap::cayley() {
  return {"cayley", [](double x) { return (x + 1.0) / (x - 1.0); }, Monotonicity::Decreasing, 1.0};
}

ScalarMap ScalarMap::modular(double beta) {
  return {"modular(beta=" + format_value(beta) + ")",
          [beta](double x) {
            const double ratio = (x + 1.0) / (x - 1.0);
            return ratio > 0 ? std::pow(ratio, 1.0 / beta) : std::nan("");
          },
          Monotonicity::Decreasing, 1.0};
}

ScalarMap ScalarMap::thermal_covariance(double beta) {
  return {"thermal_covariance(beta=" + format_value(beta) + ")",
          [beta](double x) {
            const double q = std::exp(-beta * x);
            return (1.0 + q) / (1.0 - q);
          },
          Monotonicity::Decreasing, 1.0};
}

ScalarMap ScalarMap::compose(const ScalarMap& outer, const ScalarMap& inner) {
  Monotonicity mono = Monotonicity::None;
  if (outer.monotonicity != Monotonicity::None && inner.monotonicity != Monotonicity::None) {
    mono = outer.monotonicity == inner.monotonicity ? Monotonicity::Increasing
                                                    : Monotonicity::Decreasing;
  }
  std::optional<double> at_inf;
  if (inner.at_infinity) {
    if (std::isinf(*inner.at_infinity)) {
      if (*inner.at_infinity > 0) at_inf = outer.at_infinity;
    } else {
      at_inf = outer(*inner.at_infinity);
    }
  }
  auto f = outer.fn;
  auto g = inner.fn;
  return {outer.name + "∘" + inner.name, [f, g](double x) { return f(g(x)); }, mono, at_inf};
}

bool Interval::contains(double x) const {
  const bool above = lower_closed ? x >= lower : x > lower;
  const bool below = upper_closed ? x <= upper : x < upper;
  return above && below;
}

OperatorSpec OperatorSpec::from_matrix(const Matrix& entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "operator matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double residual = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (residual > kHermitianTolerance * scale) {
    throw Error(ErrorKind::NonHermitian, "symmetry residual " + format_value(residual));
  }
  const Matrix symmetric = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  return from_eigensystem(solver.eigenvalues(), solver.eigenvectors());
}

OperatorSpec OperatorSpec::diagonal(const std::vector<double>& values) {
  RealVector diag(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) diag[static_cast<Eigen::Index>(i)] = values[i];
  return from_matrix(diag.cast<Complex>().asDiagonal());
}

OperatorSpec OperatorSpec::from_atoms(std::vector<SpectralAtom> atoms, SpectralLimits limits) {
  for (const auto& atom : atoms) {
    if (!(atom.value > 0) || !std::isfinite(atom.value)) {
      throw Error(ErrorKind::NonPositiveAtom, "atom value " + format_value(atom.value));
    }
  }
  OperatorSpec op;
  op.variant_ = Variant::Spectral;
  op.atoms_ = canonical_atoms(std::move(atoms));
  op.limits_ = limits;
  return op;
}

OperatorSpec from_eigensystem(RealVector values, Matrix vectors) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
  OperatorSpec op;
  op.variant_ = OperatorSpec::Variant::Matrix;
  op.eigenvalues_.resize(values.size());
  op.eigenvectors_.resize(vectors.rows(), vectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    op.eigenvalues_[k] = values[order[i]];
    op.eigenvectors_.col(k) = vectors.col(order[i]);
  }
  op.atoms_ = canonicalize_eigenvalues(op.eigenvalues_);
  op.matrix_ = op.eigenvectors_ * op.eigenvalues_.cast<Complex>().asDiagonal() *
               op.eigenvectors_.adjoint();
  return op;
}

std::size_t OperatorSpec::dimension() const {
  if (!is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "spectral operator has no dimension");
  }
  return static_cast<std::size_t>(matrix_.rows());
}

const Matrix& OperatorSpec::matrix() const {
  if (!is_matrix()) throw Error(ErrorKind::SpectralVariantHasNoVectors, "no matrix entries");
  return matrix_;
}

const RealVector& OperatorSpec::eigenvalues() const {
  if (!is_matrix()) throw Error(ErrorKind::SpectralVariantHasNoVectors, "no eigenvalues vector");
  return eigenvalues_;
}

const Matrix& OperatorSpec::eigenvectors() const {
  if (!is_matrix()) throw Error(ErrorKind::SpectralVariantHasNoVectors, "no eigenvectors");
  return eigenvectors_;
}

OperatorSpec make_operator(const Matrix& entries) { return OperatorSpec::from_matrix(entries); }

OperatorSpec make_operator(std::vector<SpectralAtom> atoms, SpectralLimits limits) {
  return OperatorSpec::from_atoms(std::move(atoms), limits);
}

OperatorSpec apply_function(const OperatorSpec& op, const ScalarMap& fn) {
  if (op.is_matrix()) {
    RealVector mapped(op.eigenvalues_.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
      mapped[i] = map_checked(fn, op.eigenvalues_[i]);
    }
    return from_eigensystem(std::move(mapped), op.eigenvectors_);
  }

  std::vector<SpectralAtom> atoms;
  atoms.reserve(op.atoms_.size());
  for (const auto& atom : op.atoms_) {
    atoms.push_back({map_checked(fn, atom.value), atom.multiplicity});
  }

  SpectralLimits limits;
  if (op.limits_.lower || op.limits_.upper) {
    if (fn.monotonicity == Monotonicity::None) {
      throw Error(ErrorKind::DomainViolation,
                  fn.name + " is not monotone; cannot map spectral limit points");
    }
    std::optional<double> lo, hi;
    if (op.limits_.lower) lo = map_limit(fn, *op.limits_.lower);
    if (op.limits_.upper) hi = map_limit(fn, *op.limits_.upper);
    if (fn.monotonicity == Monotonicity::Decreasing) std::swap(lo, hi);
    if (lo && !(std::isfinite(*lo))) {
      throw Error(ErrorKind::DomainViolation, fn.name + " sends the lower limit to infinity");
    }
    limits = {lo, hi};
  }

  OperatorSpec out;
  out.variant_ = OperatorSpec::Variant::Spectral;
  out.atoms_ = canonical_atoms(std::move(atoms));
  out.limits_ = limits;
  return out;
}

double inf_spectrum(const OperatorSpec& op) {
  double lowest = op.atoms().empty() ? kInf : op.atoms().front().value;
  if (op.limits().lower) lowest = std::min(lowest, *op.limits().lower);
  return lowest;
}

double op_norm(const OperatorSpec& op) {
  double highest = op.atoms().empty() ? 0.0 : op.atoms().back().value;
  if (op.limits().upper) highest = std::max(highest, *op.limits().upper);
  return highest;
}

bool is_trace_class_minus_identity(const OperatorSpec& op) {
  constexpr double kTol = 1e-12;
  if (inf_spectrum(op) < 1.0 - kTol) {
    throw Error(ErrorKind::SpectrumBelowOne, "inf spec = " + format_value(inf_spectrum(op)));
  }
  if (op.is_matrix()) return true;
  // A limit point above 1 means infinitely many eigenvalues bounded away from 1.
  if (op.limits().upper && *op.limits().upper > 1.0 + kTol) return false;
  for (const auto& atom : op.atoms()) {
    if (atom.value > 1.0 + kTol && atom.multiplicity.is_infinite()) return false;
  }
  return true;
}

std::optional<std::size_t> ProjectionSpec::rank() const {
  std::size_t total = 0;
  for (const auto& atom : atoms) {
    if (atom.multiplicity.is_infinite()) return std::nullopt;
    total += atom.multiplicity.count();
  }
  return total;
}

double ProjectionSpec::membership_residual(const Vector& f) const {
  if (!source.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "projection of a spectral operator");
  }
  if (f.size() != projector.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match projection");
  }
  return (f - projector * f).norm();
}

ProjectionSpec spectral_projection(const OperatorSpec& op, const Interval& interval) {
  ProjectionSpec proj{op, interval, {}, {}, {}, {}};
  for (const auto& atom : op.atoms()) {
    if (interval.contains(atom.value)) proj.atoms.push_back(atom);
  }
  if (op.is_matrix()) {
    const auto& values = op.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (interval.contains(values[i])) proj.indices.push_back(static_cast<std::size_t>(i));
    }
    const auto n = op.eigenvectors().rows();
    proj.basis.resize(n, static_cast<Eigen::Index>(proj.indices.size()));
    for (std::size_t k = 0; k < proj.indices.size(); ++k) {
      proj.basis.col(static_cast<Eigen::Index>(k)) =
          op.eigenvectors().col(static_cast<Eigen::Index>(proj.indices[k]));
    }
    proj.projector = proj.basis * proj.basis.adjoint();
    if (proj.indices.empty()) proj.projector = Matrix::Zero(n, n);
  }
  return proj;
}

Complex quadratic_form(const OperatorSpec& op, const Vector& f, const Vector& g) {
  const Matrix& a = op.matrix();
  if (f.size() != a.rows() || g.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "quadratic form arguments do not match operator");
  }
  return f.dot(a * g);
}

Matrix complex_power(const OperatorSpec& op, Complex exponent) {
  const auto& values = op.eigenvalues();
  Vector mapped(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0)) {
      throw Error(ErrorKind::DomainViolation,
                  "complex power of non-positive eigenvalue " + format_value(values[i]));
    }
    mapped[i] = std::exp(exponent * std::log(values[i]));
  }
  const Matrix& v = op.eigenvectors();
  return v * mapped.asDiagonal() * v.adjoint();
}

double spectral_distance(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.atoms().size() != b.atoms().size()) return kInf;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    if (!(a.atoms()[i].multiplicity == b.atoms()[i].multiplicity)) return kInf;
    worst = std::max(worst, std::abs(a.atoms()[i].value - b.atoms()[i].value));
  }
  return worst;
}

}  // namespace weylscale
