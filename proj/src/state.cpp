#include "weylscale/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "weylscale/error.hpp"

namespace weylscale {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double gaussian(const OperatorSpec& a, const Vector& f) {
  return std::exp(-0.25 * quadratic_form(a, f, f).real());
}

}  // namespace

MixtureMeasure::MixtureMeasure(std::vector<MixtureAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::InvalidMeasure, "empty mixture");
  double total = 0.0;
  for (const auto& atom : atoms_) {
    if (!(atom.weight > 0)) throw Error(ErrorKind::InvalidMeasure, "non-positive weight");
    if (!(atom.c >= 0.0 && atom.c < 1.0)) {
      throw Error(ErrorKind::InvalidMeasure, "mixture parameter c outside [0, 1)");
    }
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << total;
    throw Error(ErrorKind::InvalidMeasure, os.str());
  }
}

bool NonRegularFunctional::contains(const Vector& f) const {
  if (f.size() != projector.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "vector outside the functional's space");
  }
  return (f - projector * f).norm() <= kSubspaceTolerance * f.norm();
}

std::string StateFunctional::tag() const {
  return std::visit(overloaded{
                        [](const QuasiFree&) { return std::string("quasi_free"); },
                        [](const RescaledFock&) { return std::string("rescaled_fock"); },
                        [](const Mixture&) { return std::string("mixture"); },
                        [](const Restricted&) { return std::string("restricted"); },
                        [](const Trace&) { return std::string("trace"); },
                        [](const Rescaled& r) { return "rescaled(" + r.base->tag() + ")"; },
                    },
                    form_);
}

std::optional<std::size_t> StateFunctional::dimension() const {
  return std::visit(
      overloaded{
          [](const QuasiFree& q) -> std::optional<std::size_t> { return q.covariance.dimension(); },
          [](const Restricted& r) -> std::optional<std::size_t> {
            return static_cast<std::size_t>(r.data.projector.rows());
          },
          [](const Rescaled& r) { return r.base->dimension(); },
          [](const auto&) -> std::optional<std::size_t> { return std::nullopt; },
      },
      form_);
}

Complex StateFunctional::operator()(const Vector& f) const {
  if (auto dim = dimension(); dim && *dim != static_cast<std::size_t>(f.size())) {
    throw Error(ErrorKind::DimensionMismatch, "vector does not match the functional's space");
  }
  return std::visit(
      overloaded{
          [&](const QuasiFree& q) -> Complex { return gaussian(q.covariance, f); },
          [&](const RescaledFock& r) -> Complex {
            return std::exp(-f.squaredNorm() / (4.0 * r.h));
          },
          [&](const Mixture& m) -> Complex {
            const double norm2 = f.squaredNorm();
            double acc = 0.0;
            for (const auto& atom : m.measure.atoms()) {
              acc += atom.weight * std::exp(-0.25 * norm2 * (1.0 + atom.c) / (1.0 - atom.c));
            }
            return acc;
          },
          [&](const Restricted& r) -> Complex {
            if (!r.data.contains(f)) return 0.0;
            const Vector reduced = r.data.basis.adjoint() * f;
            return gaussian(r.data.inner, reduced);
          },
          [&](const Trace&) -> Complex { return is_zero_vector(f) ? 1.0 : 0.0; },
          [&](const Rescaled& r) -> Complex { return (*r.base)(f / std::sqrt(r.h)); },
      },
      form_);
}

Complex evaluate_state(const StateFunctional& phi, const WeylWord& u) {
  if (auto dim = phi.dimension(); dim && *dim != u.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "word and functional live on different spaces");
  }
  Complex acc = 0.0;
  for (const auto& t : u.terms()) acc += t.coefficient * phi(t.vector);
  return acc;
}

StateFunctional quasi_free_functional(const OperatorSpec& a) {
  if (!a.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "quasi-free functional needs a matrix");
  }
  if (inf_spectrum(a) < 1.0 - 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "inf spec(A) = " << inf_spectrum(a) << " < 1";
    throw Error(ErrorKind::CovarianceBelowIdentity, os.str());
  }
  return StateFunctional(StateFunctional::QuasiFree{a});
}

StateFunctional quasi_free_functional_unchecked(const OperatorSpec& a) {
  if (!a.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "quasi-free functional needs a matrix");
  }
  return StateFunctional(StateFunctional::QuasiFree{a});
}

StateFunctional rescaled_fock_functional(double h) {
  if (!(h > 0)) throw Error(ErrorKind::NonPositiveScale, "rescaled Fock state needs h > 0");
  return StateFunctional(StateFunctional::RescaledFock{h});
}

StateFunctional rescale_functional(const StateFunctional& phi, double h) {
  if (!(h > 0)) throw Error(ErrorKind::NonPositiveScale, "rescaling needs h > 0");
  if (h == 1.0) return phi;
  using SF = StateFunctional;
  return std::visit(
      overloaded{
          [&](const SF::QuasiFree& q) {
            return SF(SF::QuasiFree{apply_function(q.covariance, ScalarMap::scale(1.0 / h))});
          },
          [&](const SF::RescaledFock& r) { return SF(SF::RescaledFock{r.h * h}); },
          [&](const SF::Trace&) { return SF::trace(); },
          [&](const auto&) { return SF(SF::Rescaled{std::make_shared<const SF>(phi), h}); },
      },
      phi.form());
}

Matrix gram_matrix(const StateFunctional& phi, const std::vector<Vector>& vectors, double h) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector& fj = vectors[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < n; ++k) {
      const Vector& fk = vectors[static_cast<std::size_t>(k)];
      if (fj.size() != fk.size()) throw Error(ErrorKind::DimensionMismatch, "Gram vectors");
      const Complex phase = std::exp(Complex(0.0, -0.5 * symplectic_form(fj, fk, h)));
      m(j, k) = phase * phi(fj - fk);
    }
  }
  return m;
}

GramReport check_sigma_h_positivity(const StateFunctional& phi, const std::vector<Vector>& vectors,
                                    double h, double tol) {
  GramReport report{vectors, h, gram_matrix(phi, vectors, h), 0.0, tol, true};
  if (vectors.empty()) return report;
  // The kernel is Hermitian up to rounding; symmetrize before the eigensolve.
  const Matrix symmetric = 0.5 * (report.kernel + report.kernel.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  const double scale = static_cast<double>(vectors.size()) * report.kernel.cwiseAbs().maxCoeff();
  report.positive = report.min_eigenvalue >= -tol * scale;
  return report;
}

TwoPointReport two_point_criterion(const OperatorSpec& a, const Vector& f, const Vector& g,
                                   double h) {
  if (!(h > 0)) throw Error(ErrorKind::NonPositiveScale, "two-point criterion needs h > 0");
  const double sigma = symplectic_form(f, g);
  const double sff = quadratic_form(a, f, f).real() / h;
  const double sgg = quadratic_form(a, g, g).real() / h;
  TwoPointReport report{sigma * sigma, sff * sgg, false};
  report.satisfied = report.lhs <= report.rhs + 1e-12;
  return report;
}

double h_max(const OperatorSpec& a) {
  const double bottom = inf_spectrum(a);
  if (bottom < 1.0 - 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "inf spec(A) = " << bottom;
    throw Error(ErrorKind::SpectrumBelowOne, os.str());
  }
  return bottom;
}

WitnessScan negative_witness_scan(const OperatorSpec& a, double h) {
  const Vector e = a.eigenvectors().col(0);
  const Complex i(0.0, 1.0);
  const StateFunctional rescaled = quasi_free_functional_unchecked(
      apply_function(a, ScalarMap::scale(1.0 / h)));
  WitnessScan scan;
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    std::vector<Vector> family = {
        Vector::Zero(e.size()),
        s * e,
        s * i * e,
        s * (e + i * e) / std::sqrt(2.0),
        2.0 * s * e,
        2.0 * s * i * e,
    };
    const GramReport report = check_sigma_h_positivity(rescaled, family, 1.0);
    scan.min_eigenvalue = std::min(scan.min_eigenvalue, report.min_eigenvalue);
    if (report.min_eigenvalue < kWitnessThreshold) {
      scan.found = true;
      scan.scale = s;
      scan.witness = std::move(family);
      break;
    }
  }
  return scan;
}

}  // namespace weylscale
