#pragma once

// KMS calculus for quasi-free equilibrium states: thermal covariance from a
// one-particle Hamiltonian, the modular operator and its dynamics, the
// boundary functions F and Phi on the strip 0 <= Im z <= beta, and the
// rescaled structure (A_h = A / h, Delta_h = j_h(Delta)).

#include <algorithm>
#include <vector>

#include "weylscale/spectral.hpp"
#include "weylscale/weyl_word.hpp"

namespace weylscale {

inline constexpr double kKmsResidualTolerance = 1e-10;

// A = (I + e^{-beta h}) (I - e^{-beta h})^{-1}.
// Throws NonPositiveHamiltonian, NonPositiveBeta.
OperatorSpec covariance_from_hamiltonian(const OperatorSpec& hamiltonian, double beta);

// Delta = ((A + I) / (A - I))^{1/beta}. Throws DomainViolation when 1 is in the
// point spectrum of A, NonPositiveBeta.
OperatorSpec modular_operator(const OperatorSpec& covariance, double beta);

// T_t = Delta^{it}.
Matrix time_evolution(const OperatorSpec& modular, double t);

// W_f -> W_{T_t f} on every generator.
WeylWord evolve_word(const WeylWord& u, const OperatorSpec& modular, double t);

struct KmsModel {
  OperatorSpec hamiltonian;
  double beta;
  double epsilon;            // inf spec of the Hamiltonian
  OperatorSpec covariance;   // A
  OperatorSpec modular;      // Delta
};

KmsModel make_kms_model(const OperatorSpec& hamiltonian, double beta);

// ||A||_op predicted from the bottom of the Hamiltonian: (e^{beta eps}+1)/(e^{beta eps}-1).
double thermal_covariance_norm(double epsilon, double beta);

// F(f,g;t) = 1/2 <f, Delta^{it}(A+I) g> + 1/2 <g, Delta^{-it}(A-I) f>.
// A and Delta must commute (ModelMismatch) and be matrices of matching size.
Complex F_function(const OperatorSpec& a, const OperatorSpec& delta, const Vector& f,
                   const Vector& g, double t);

// Phi(f,g;z) = 1/2 <f, (A+I) Delta^{iz} g> + 1/2 <g, (A-I) Delta^{-iz} f> on the
// closed strip 0 <= Im z <= beta (OutsideStrip otherwise).
Complex Phi_function(const OperatorSpec& a, const OperatorSpec& delta, double beta,
                     const Vector& f, const Vector& g, Complex z);

struct TwoPointFunction {
  // exp(S(f,f)/4 - S(g,g)/4) exp(-F/2): the asymmetric prefactor variant.
  // It differs from omega(W_f W_{T_t g}) whenever S(f,f) != 0.
  Complex printed_form;
  // exp(-S(f,f)/4 - S(g,g)/4) exp(-F/2), which equals omega(W_f W_{T_t g}).
  Complex quasi_free_form;
  bool forms_disagree;
};

TwoPointFunction two_point_function(const OperatorSpec& a, const OperatorSpec& delta,
                                    const Vector& f, const Vector& g, double t);

struct KmsWitnessReport {
  Vector f;
  Vector g;
  std::vector<double> t_grid;
  std::vector<Complex> F_values;          // F(f,g;t)
  std::vector<Complex> Phi_lower;         // Phi(f,g;t + i0)
  std::vector<Complex> F_swapped;         // F(g,f;-t)
  std::vector<Complex> Phi_upper;         // Phi(f,g;t + i beta)
  std::vector<double> r0;
  std::vector<double> r_beta;
  double strip_sup = 0.0;                 // max |Phi| on the sampled strip

  double max_r0() const;
  double max_r_beta() const;
  double max_residual() const { return std::max(max_r0(), max_r_beta()); }
};

// 21 points on [-5, 5].
std::vector<double> default_t_grid();
std::vector<double> linear_grid(double start, double stop, std::size_t count);

// Boundary residuals for an arbitrary commuting (A, Delta) pair.
KmsWitnessReport boundary_residuals(const OperatorSpec& a, const OperatorSpec& delta, double beta,
                                    const Vector& f, const Vector& g,
                                    const std::vector<double>& t_grid);

KmsWitnessReport kms_boundary_residuals(const KmsModel& model, const Vector& f, const Vector& g,
                                        const std::vector<double>& t_grid);

// j_h(lambda) = ((1-h + (1+h) lambda^beta) / (1+h + (1-h) lambda^beta))^{1/beta}.
// Requires lambda >= 1, h > 0, beta > 0 and, for h > 1, lambda < lambda_*
// (where the denominator vanishes). Throws OutOfRange.
double j_h_function(double lambda, double h, double beta);
ScalarMap j_h_map(double h, double beta);

struct RescaledKmsModel {
  KmsModel base;
  double h;
  OperatorSpec covariance;        // A_h = A / h
  OperatorSpec modular;           // Delta_h = j_h(Delta)
  OperatorSpec modular_direct;    // ((A_h + I)/(A_h - I))^{1/beta}
  OperatorSpec generator;         // log Delta_h
  double delta;                   // log j_h(inf spec Delta)
  double route_discrepancy;       // between the two Delta_h constructions
};

// h in (0, 1]; h = 1 reproduces the base model. Throws OutOfRange.
RescaledKmsModel rescaled_modular(const KmsModel& model, double h);

Complex F_h_function(const RescaledKmsModel& model, const Vector& f, const Vector& g, double t);
Complex Phi_h_function(const RescaledKmsModel& model, const Vector& f, const Vector& g,
                       Complex z);
KmsWitnessReport rescaled_kms_residuals(const RescaledKmsModel& model, const Vector& f,
                                        const Vector& g, const std::vector<double>& t_grid);

// max |spectral value| difference between Delta and e^h (matrix entries too
// for the Matrix variant).
double modular_exponential_residual(const KmsModel& model);

}  // namespace weylscale
