#pragma once

// State functionals on the Weyl algebra, described by their generating
// function phi(f) = omega(W_f), and the finite Gram-kernel test for
// sigma_h-positivity.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weylscale/spectral.hpp"
#include "weylscale/weyl_word.hpp"

namespace weylscale {

struct MixtureAtom {
  double c;
  double weight;
};

// Finite probability measure on [0, 1) used to mix the family omega_c.
class MixtureMeasure {
 public:
  // Throws InvalidMeasure unless weights are positive, sum to 1 within 1e-12
  // and every c lies in [0, 1).
  explicit MixtureMeasure(std::vector<MixtureAtom> atoms);

  const std::vector<MixtureAtom>& atoms() const noexcept { return atoms_; }

 private:
  std::vector<MixtureAtom> atoms_;
};

// phi(f) = exp(-<f, A f>/4) on a closed subspace H_h, 0 elsewhere. Membership
// is ||f - E f|| <= kSubspaceTolerance ||f||, so t f is classified the same way
// for every t != 0.
struct NonRegularFunctional {
  Matrix projector;       // n x n orthogonal projection onto H_h
  Matrix basis;           // n x k orthonormal basis of H_h
  OperatorSpec inner;     // k x k covariance in the basis above

  bool contains(const Vector& f) const;
};

inline constexpr double kSubspaceTolerance = 1e-12;

class StateFunctional {
 public:
  struct QuasiFree {
    OperatorSpec covariance;
  };
  struct RescaledFock {
    double h;
  };
  struct Mixture {
    MixtureMeasure measure;
  };
  struct Restricted {
    NonRegularFunctional data;
  };
  struct Trace {};
  // Generic f -> base(f / sqrt(h)) for forms without a closed rescaled form.
  struct Rescaled {
    std::shared_ptr<const StateFunctional> base;
    double h;
  };
  using Form = std::variant<QuasiFree, RescaledFock, Mixture, Restricted, Trace, Rescaled>;

  explicit StateFunctional(Form form) : form_(std::move(form)) {}

  static StateFunctional trace() { return StateFunctional(Trace{}); }

  const Form& form() const noexcept { return form_; }
  std::string tag() const;
  // Space dimension when the form fixes one.
  std::optional<std::size_t> dimension() const;

  Complex operator()(const Vector& f) const;

 private:
  Form form_;
};

// sum_f c_f phi(f). Throws DimensionMismatch.
Complex evaluate_state(const StateFunctional& phi, const WeylWord& u);

// Quasi-free functional exp(-<f, A f>/4). Requires A >= I (within 1e-12),
// otherwise throws CovarianceBelowIdentity.
StateFunctional quasi_free_functional(const OperatorSpec& a);
// Same without the A >= I check, for building counterexamples.
StateFunctional quasi_free_functional_unchecked(const OperatorSpec& a);

StateFunctional rescaled_fock_functional(double h);

// f -> phi(f / sqrt(h)). QuasiFree(A) maps to QuasiFree(A / h). No positivity check.
StateFunctional rescale_functional(const StateFunctional& phi, double h);

// M_jk = exp(-(i/2) sigma_h(f_j, f_k)) phi(f_j - f_k).
Matrix gram_matrix(const StateFunctional& phi, const std::vector<Vector>& vectors, double h);

inline constexpr double kGramTolerance = 1e-10;

struct GramReport {
  std::vector<Vector> vectors;
  double h;
  Matrix kernel;
  double min_eigenvalue;
  double tolerance;
  bool positive;
};

// Passes iff min eigenvalue >= -tol * n * max |M_jk|.
GramReport check_sigma_h_positivity(const StateFunctional& phi, const std::vector<Vector>& vectors,
                                    double h, double tol = kGramTolerance);

struct TwoPointReport {
  double lhs;  // |sigma(f, g)|^2
  double rhs;  // <f, (A/h) f> <g, (A/h) g>
  bool satisfied;
};

TwoPointReport two_point_criterion(const OperatorSpec& a, const Vector& f, const Vector& g,
                                   double h);

// inf spec(A); throws SpectrumBelowOne when A is not >= I.
double h_max(const OperatorSpec& a);

struct WitnessScan {
  bool found = false;
  double scale = 0.0;                 // s at which the witness appeared
  double min_eigenvalue = 0.0;        // most negative eigenvalue seen
  std::vector<Vector> witness;        // vector family that produced it
};

inline constexpr double kWitnessThreshold = -1e-8;

// Scans the family {0, s e, s ie, s (e + ie)/sqrt2, 2s e, 2s ie},
// s in {0.25, 0.5, 1, 2, 4}, with e the lowest eigenvector of A, for a Gram
// kernel of the rescaled functional QuasiFree(A/h) at scale 1 with an
// eigenvalue below kWitnessThreshold.
WitnessScan negative_witness_scan(const OperatorSpec& a, double h);

}  // namespace weylscale
