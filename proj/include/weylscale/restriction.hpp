#pragma once

// Scaling beyond h_max: for 1 < h < h_* = ||A||_op the rescaled quasi-free
// functional is only positive on the Weyl algebra of H_h = E((h, h_*]) H.
// This module builds the compressed operators on H_h, the restricted KMS
// data, the non-regular extension by zero, and the trace state.

#include <optional>
#include <vector>

#include "weylscale/kms.hpp"
#include "weylscale/spectral.hpp"
#include "weylscale/state.hpp"
#include "weylscale/weyl_word.hpp"

namespace weylscale {

struct KmsRestriction {
  double beta;
  double lambda_star;                    // ((h+1)/(h-1))^{1/beta}
  OperatorSpec modular;                  // Delta^(h) on H_h
  OperatorSpec rescaled_modular;         // Delta_h^(h) = j_h(Delta^(h))
  OperatorSpec rescaled_modular_direct;  // from (1/h) A^(h)
  double route_discrepancy;
};

struct RestrictedModel {
  OperatorSpec covariance;               // A on the full space
  double h;
  double h_star;
  ProjectionSpec projection;             // E_h = E((h, h_*])
  OperatorSpec restricted_covariance;    // A^(h), compressed to H_h
  OperatorSpec rescaled_covariance;      // (1/h) A^(h)
  double rescaled_bottom;                // inf spec (1/h) A^(h), >= 1 by construction
  std::optional<KmsRestriction> kms;

  // Coordinates of f in the compressed basis; VectorOutsideSubspace unless f in H_h.
  Vector compress(const Vector& f) const;
};

// Requires 1 < h < ||A||_op (ScaleOutOfRange).
RestrictedModel restricted_model(const OperatorSpec& covariance, double h);
// KMS flavour: additionally builds Delta^(h) and Delta_h^(h).
RestrictedModel restricted_model(const KmsModel& model, double h);

// ((h+1)/(h-1))^{1/beta}; OutOfRange for h < 1 + 1e-9 or beta <= 0.
double lambda_star(double h, double beta);

struct CorrespondenceReport {
  bool equal;
  std::vector<bool> covariance_side;     // A-atom in (h, h_*]
  std::vector<bool> modular_side;        // matching Delta-atom in [e^eps, lambda_*)
};

// Compares E((h, h_*]) with P([e^eps, lambda_*)) atom by atom. Delta atoms are
// the modular images of the A atoms, lambda_* the image of h. Requires
// A = covariance_from_hamiltonian(hamiltonian, beta) (ModelMismatch).
CorrespondenceReport spectral_correspondence_check(const OperatorSpec& covariance,
                                                   const OperatorSpec& hamiltonian, double beta,
                                                   double h);

enum class RestrictedDynamics {
  Restricted,          // A^(h) with Delta^(h)
  RescaledRestricted,  // (1/h) A^(h) with Delta_h^(h)
};

// Vectors are given in the full space and must lie in H_h (VectorOutsideSubspace).
KmsWitnessReport restricted_kms_residuals(const RestrictedModel& model, const Vector& f,
                                          const Vector& g, const std::vector<double>& t_grid,
                                          RestrictedDynamics dynamics);

// omega_h^(h) on H_h extended by 0 off H_h. ScaleOutOfRange as restricted_model.
NonRegularFunctional nonregular_extension(const OperatorSpec& covariance, double h);
StateFunctional nonregular_state(const OperatorSpec& covariance, double h);
// The unrescaled restriction omega^(h) (covariance A^(h)) extended by 0.
StateFunctional restricted_state(const RestrictedModel& model);

// E_{h'} <= E_h as projections.
bool is_subprojection(const ProjectionSpec& smaller, const ProjectionSpec& larger);

StateFunctional trace_state();

// max |phi(u v) - phi(v u)| over the pairs (products at h = 1).
double check_trace_property(const StateFunctional& phi,
                            const std::vector<std::pair<WeylWord, WeylWord>>& pairs);

struct LimitSequence {
  std::vector<double> h_grid;
  std::vector<Complex> values;           // omega~_h(W_f); trace-state value for h >= h_*
  bool top_eigenspace_mass;              // f has a component in E({h_*})
  bool eventually_zero;                  // last value is 0
};

// Requires every grid point > 1 (ScaleOutOfRange) and a strictly increasing grid.
LimitSequence limit_to_trace_state(const OperatorSpec& covariance, const Vector& f,
                                   const std::vector<double>& h_grid);

}  // namespace weylscale
