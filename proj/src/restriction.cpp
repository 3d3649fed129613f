#include "weylscale/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "weylscale/error.hpp"

namespace weylscale {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Operator on the compressed basis of H_h whose spectrum is `values`
// (one entry per selected eigenvector, in the projection's order).
OperatorSpec compressed_diagonal(const RealVector& values) {
  const auto k = values.size();
  return from_eigensystem(values, Matrix::Identity(k, k));
}

RealVector selected_values(const OperatorSpec& op, const ProjectionSpec& proj) {
  RealVector values(static_cast<Eigen::Index>(proj.indices.size()));
  for (std::size_t i = 0; i < proj.indices.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = op.eigenvalues()[static_cast<Eigen::Index>(proj.indices[i])];
  }
  return values;
}

OperatorSpec restrict_operator(const OperatorSpec& op, const ProjectionSpec& proj) {
  if (op.is_matrix()) return compressed_diagonal(selected_values(op, proj));
  return OperatorSpec::from_atoms(proj.atoms);
}

}  // namespace

Vector RestrictedModel::compress(const Vector& f) const {
  if (!covariance.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "spectral model has no vectors");
  }
  const double residual = projection.membership_residual(f);
  if (residual > kSubspaceTolerance * f.norm()) {
    throw Error(ErrorKind::VectorOutsideSubspace, "||f - E_h f|| = " + fmt(residual));
  }
  return projection.basis.adjoint() * f;
}

RestrictedModel restricted_model(const OperatorSpec& covariance, double h) {
  const double h_star = op_norm(covariance);
  if (!(h > 1.0 && h < h_star)) {
    throw Error(ErrorKind::ScaleOutOfRange,
                "h = " + fmt(h) + " outside (1, h_*) with h_* = " + fmt(h_star));
  }
  ProjectionSpec projection = spectral_projection(covariance, Interval::open_closed(h, h_star));
  OperatorSpec restricted = restrict_operator(covariance, projection);
  OperatorSpec rescaled = apply_function(restricted, ScalarMap::scale(1.0 / h));
  const double bottom = inf_spectrum(rescaled);
  return {covariance,           h,      h_star, std::move(projection), std::move(restricted),
          std::move(rescaled), bottom, std::nullopt};
}

RestrictedModel restricted_model(const KmsModel& model, double h) {
  RestrictedModel out = restricted_model(model.covariance, h);
  KmsRestriction kms{model.beta, lambda_star(h, model.beta),
                     restrict_operator(model.covariance, out.projection),
                     OperatorSpec::identity_atoms(), OperatorSpec::identity_atoms(), 0.0};
  // Delta shares the eigenvectors of A, so Delta^(h) is the modular map applied
  // to the compressed A^(h).
  kms.modular = apply_function(out.restricted_covariance, ScalarMap::modular(model.beta));
  kms.rescaled_modular = apply_function(kms.modular, j_h_map(h, model.beta));
  kms.rescaled_modular_direct = modular_operator(out.rescaled_covariance, model.beta);
  kms.route_discrepancy = spectral_distance(kms.rescaled_modular, kms.rescaled_modular_direct);
  if (kms.rescaled_modular.is_matrix()) {
    kms.route_discrepancy =
        std::max(kms.route_discrepancy, (kms.rescaled_modular.matrix() -
                                         kms.rescaled_modular_direct.matrix())
                                            .cwiseAbs()
                                            .maxCoeff());
  }
  out.kms = std::move(kms);
  return out;
}

double lambda_star(double h, double beta) {
  if (!(beta > 0)) throw Error(ErrorKind::OutOfRange, "lambda_* needs beta > 0");
  if (!(h >= 1.0 + 1e-9)) throw Error(ErrorKind::OutOfRange, "lambda_* needs h > 1, got " + fmt(h));
  return std::pow((h + 1.0) / (h - 1.0), 1.0 / beta);
}

CorrespondenceReport spectral_correspondence_check(const OperatorSpec& covariance,
                                                   const OperatorSpec& hamiltonian, double beta,
                                                   double h) {
  const auto& a_atoms = covariance.atoms();
  const auto& h_atoms = hamiltonian.atoms();
  if (a_atoms.size() != h_atoms.size()) {
    throw Error(ErrorKind::ModelMismatch, "A and the Hamiltonian have different atom counts");
  }
  const ScalarMap thermal = ScalarMap::thermal_covariance(beta);
  const std::size_t m = a_atoms.size();
  for (std::size_t i = 0; i < m; ++i) {
    // The thermal map is decreasing: the i-th atom of A comes from the (m-1-i)-th of h.
    const auto& source = h_atoms[m - 1 - i];
    const double expected = thermal(source.value);
    if (!(a_atoms[i].multiplicity == source.multiplicity) ||
        std::abs(a_atoms[i].value - expected) > 1e-12 * std::max(1.0, expected)) {
      throw Error(ErrorKind::ModelMismatch, "A is not the thermal covariance of the Hamiltonian");
    }
  }
  // Delta atoms are taken through the modular map of A, the same route that
  // builds the model's Delta. Going through exp(h) instead rounds separately
  // and can move an atom lying exactly on an endpoint to the other side.
  const ScalarMap modular = ScalarMap::modular(beta);
  const double h_star = op_norm(covariance);
  const Interval a_interval = Interval::open_closed(h, h_star);
  const double bottom = modular(h_star);
  const Interval delta_interval = Interval::closed_open(bottom, modular(h));

  CorrespondenceReport report{true, {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    const bool a_side = a_interval.contains(a_atoms[i].value);
    const bool d_side = delta_interval.contains(modular(a_atoms[i].value));
    report.covariance_side.push_back(a_side);
    report.modular_side.push_back(d_side);
    report.equal = report.equal && (a_side == d_side);
  }
  return report;
}

KmsWitnessReport restricted_kms_residuals(const RestrictedModel& model, const Vector& f,
                                          const Vector& g, const std::vector<double>& t_grid,
                                          RestrictedDynamics dynamics) {
  if (!model.kms) {
    throw Error(ErrorKind::ModelMismatch, "restricted model was not built from a KMS model");
  }
  const Vector fr = model.compress(f);
  const Vector gr = model.compress(g);
  if (dynamics == RestrictedDynamics::Restricted) {
    return boundary_residuals(model.restricted_covariance, model.kms->modular, model.kms->beta,
                              fr, gr, t_grid);
  }
  return boundary_residuals(model.rescaled_covariance, model.kms->rescaled_modular,
                            model.kms->beta, fr, gr, t_grid);
}

NonRegularFunctional nonregular_extension(const OperatorSpec& covariance, double h) {
  if (!covariance.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "non-regular extension needs a matrix");
  }
  RestrictedModel model = restricted_model(covariance, h);
  return {model.projection.projector, model.projection.basis, model.rescaled_covariance};
}

StateFunctional nonregular_state(const OperatorSpec& covariance, double h) {
  return StateFunctional(StateFunctional::Restricted{nonregular_extension(covariance, h)});
}

StateFunctional restricted_state(const RestrictedModel& model) {
  if (!model.covariance.is_matrix()) {
    throw Error(ErrorKind::SpectralVariantHasNoVectors, "restricted state needs a matrix");
  }
  return StateFunctional(StateFunctional::Restricted{NonRegularFunctional{
      model.projection.projector, model.projection.basis, model.restricted_covariance}});
}

bool is_subprojection(const ProjectionSpec& smaller, const ProjectionSpec& larger) {
  if (smaller.source.is_matrix() && larger.source.is_matrix()) {
    if (smaller.projector.rows() != larger.projector.rows()) return false;
    if (smaller.empty()) return true;
    return (larger.projector * smaller.projector - smaller.projector).cwiseAbs().maxCoeff() <=
           1e-10;
  }
  for (const auto& atom : smaller.atoms) {
    const bool present = std::any_of(larger.atoms.begin(), larger.atoms.end(),
                                     [&](const SpectralAtom& a) { return a == atom; });
    if (!present) return false;
  }
  return true;
}

StateFunctional trace_state() { return StateFunctional::trace(); }

double check_trace_property(const StateFunctional& phi,
                            const std::vector<std::pair<WeylWord, WeylWord>>& pairs) {
  double worst = 0.0;
  for (const auto& [u, v] : pairs) {
    const Complex uv = evaluate_state(phi, weyl_multiply(u, v, 1.0));
    const Complex vu = evaluate_state(phi, weyl_multiply(v, u, 1.0));
    worst = std::max(worst, std::abs(uv - vu));
  }
  return worst;
}

LimitSequence limit_to_trace_state(const OperatorSpec& covariance, const Vector& f,
                                   const std::vector<double>& h_grid) {
  const double h_star = op_norm(covariance);
  const ProjectionSpec top = spectral_projection(covariance, Interval::closed(h_star, h_star));
  LimitSequence seq{h_grid, {}, (top.projector * f).norm() > 1e-12, false};
  const StateFunctional trace = trace_state();
  for (std::size_t k = 0; k < h_grid.size(); ++k) {
    const double h = h_grid[k];
    if (k > 0 && !(h > h_grid[k - 1])) {
      throw Error(ErrorKind::OutOfRange, "h grid must be strictly increasing");
    }
    if (!(h > 1.0)) throw Error(ErrorKind::ScaleOutOfRange, "limit grid needs h > 1");
    if (h >= h_star) {
      seq.values.push_back(trace(f));
    } else {
      seq.values.push_back(nonregular_state(covariance, h)(f));
    }
  }
  seq.eventually_zero = !seq.values.empty() && seq.values.back() == Complex(0.0);
  return seq;
}

}  // namespace weylscale
