#include <cmath>
#include <numbers>

#include "doctest.h"
#include "weylscale/error.hpp"
#include "weylscale/kms.hpp"
#include "weylscale/sampling.hpp"
#include "weylscale/state.hpp"

using namespace weylscale;

namespace {

KmsModel scalar_model() {
  return make_kms_model(OperatorSpec::diagonal({std::numbers::ln2}), 1.0);
}

}  // namespace

TEST_SUITE("kms") {

TEST_CASE("thermal covariance and modular operator of the ln2 model") {
  const KmsModel m = scalar_model();
  // e^{-ln2} = 1/2: A = (3/2)/(1/2) = 3, Delta = (4/2)^1 = 2 = e^{ln2}.
  CHECK(m.covariance.eigenvalues()[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(m.modular.eigenvalues()[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(modular_exponential_residual(m) <= 1e-10);
  CHECK(thermal_covariance_norm(std::numbers::ln2, 1.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(make_kms_model(OperatorSpec::diagonal({-1.0}), 1.0), Error);
  CHECK_THROWS_AS(make_kms_model(OperatorSpec::diagonal({1.0}), 0.0), Error);
}

TEST_CASE("j_h against hand values") {
  // j_{1/2}(2) at beta = 1: (1/2 + 3) / (3/2 + 1) = 7/5.
  CHECK(j_h_function(2.0, 0.5, 1.0) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(j_h_function(1.0, 0.5, 1.0) == 1.0);
  CHECK(j_h_function(3.0, 1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  // h = 2, beta = 1: pole at lambda_* = 3.
  CHECK(j_h_function(2.0, 2.0, 1.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(j_h_function(3.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(j_h_function(0.5, 0.5, 1.0), Error);
  double previous = 1.0;
  for (double lambda = 1.1; lambda < 10.0; lambda += 0.3) {
    const double v = j_h_function(lambda, 0.4, 1.5);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("boundary identities for the scalar and two-mode models") {
  Rng rng(4);
  const KmsModel two = make_kms_model(OperatorSpec::diagonal({0.5, 1.5}), 2.0);
  for (const KmsModel* m : {&two}) {
    const Vector f = random_vector(rng, 2);
    const Vector g = random_vector(rng, 2);
    const KmsWitnessReport r = kms_boundary_residuals(*m, f, g, default_t_grid());
    CHECK(r.max_residual() <= 1e-10);
    CHECK(r.t_grid.size() == 21);
  }
  Vector f(1), g(1);
  f << Complex(0.6, 0.2);
  g << Complex(-0.3, 0.5);
  CHECK(kms_boundary_residuals(scalar_model(), f, g, default_t_grid()).max_residual() <= 1e-10);
}

TEST_CASE("Phi is only defined on the closed strip") {
  const KmsModel m = scalar_model();
  Vector f(1);
  f << 1.0;
  CHECK_NOTHROW(Phi_function(m.covariance, m.modular, 1.0, f, f, Complex(0.0, 1.0)));
  CHECK_THROWS_AS(Phi_function(m.covariance, m.modular, 1.0, f, f, Complex(0.0, 1.5)), Error);
  CHECK_THROWS_AS(Phi_function(m.covariance, m.modular, 1.0, f, f, Complex(0.0, -0.1)), Error);
}

TEST_CASE("quasi-free two-point form equals omega(W_f W_{T_t g})") {
  const KmsModel m = make_kms_model(OperatorSpec::diagonal({0.5, 1.5}), 2.0);
  const StateFunctional omega = quasi_free_functional(m.covariance);
  Vector f(2), g(2);
  f << Complex(0.4, 0.1), Complex(-0.2, 0.3);
  g << Complex(0.1, -0.5), Complex(0.25, 0.05);
  for (double t : {-2.0, 0.0, 1.3}) {
    const TwoPointFunction tp = two_point_function(m.covariance, m.modular, f, g, t);
    const WeylWord product = weyl_multiply(WeylWord::generator(f),
                                           WeylWord::generator(time_evolution(m.modular, t) * g), 1.0);
    const Complex oracle = evaluate_state(omega, product);
    CHECK(std::abs(tp.quasi_free_form - oracle) < 1e-14);
    CHECK(tp.forms_disagree);
  }
}

TEST_CASE("rescaled modular structure") {
  const KmsModel m = scalar_model();
  const RescaledKmsModel same = rescaled_modular(m, 1.0);
  CHECK(spectral_distance(same.modular, m.modular) <= 1e-12);
  for (double h : {0.5, 0.25}) {
    const RescaledKmsModel r = rescaled_modular(m, h);
    CHECK(r.route_discrepancy <= 1e-12);
    CHECK(r.delta == inf_spectrum(r.generator));
    // A_h = 3/h, Delta_h = (3/h + 1)/(3/h - 1).
    CHECK(r.modular.eigenvalues()[0] == doctest::Approx((3 / h + 1) / (3 / h - 1)));
    Vector f(1), g(1);
    f << 0.5;
    g << Complex(0.0, 0.4);
    CHECK(rescaled_kms_residuals(r, f, g, default_t_grid()).max_residual() <= 1e-10);
  }
  CHECK_THROWS_AS(rescaled_modular(m, 1.5), Error);
  CHECK_THROWS_AS(rescaled_modular(m, 0.0), Error);
}

TEST_CASE("rescaling at h = 1 reproduces the unrescaled report") {
  const KmsModel m = make_kms_model(OperatorSpec::diagonal({0.5, 1.5}), 2.0);
  Vector f(2), g(2);
  f << 0.3, Complex(0.0, 0.2);
  g << Complex(0.1, 0.1), -0.4;
  const KmsWitnessReport a = kms_boundary_residuals(m, f, g, default_t_grid());
  const KmsWitnessReport b = rescaled_kms_residuals(rescaled_modular(m, 1.0), f, g, default_t_grid());
  for (std::size_t k = 0; k < a.F_values.size(); ++k) {
    CHECK(std::abs(a.F_values[k] - b.F_values[k]) <= 1e-12);
    CHECK(std::abs(a.Phi_upper[k] - b.Phi_upper[k]) <= 1e-12);
  }
}

TEST_CASE("time evolution acts on words") {
  const KmsModel m = scalar_model();
  Vector f(1);
  f << 1.0;
  const WeylWord w = evolve_word(WeylWord::generator(f), m.modular, 0.5);
  const Vector moved = time_evolution(m.modular, 0.5) * f;
  CHECK(w.coefficient(moved) == Complex(1.0));
}

}
