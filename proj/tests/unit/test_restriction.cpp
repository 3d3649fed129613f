#include <cmath>
#include <numbers>

#include "doctest.h"
#include "weylscale/error.hpp"
#include "weylscale/restriction.hpp"
#include "weylscale/sampling.hpp"

using namespace weylscale;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ConfigInvalid;
}

}  // namespace

TEST_SUITE("restriction") {

TEST_CASE("lambda_* hand values") {
  CHECK(lambda_star(2.0, 1.0) == 3.0);
  CHECK(lambda_star(1.5, 1.0) == 5.0);
  CHECK(lambda_star(3.0, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(kind_of([] { lambda_star(1.0, 1.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("restricted model on diag(1, 2, 3)") {
  const OperatorSpec a = OperatorSpec::diagonal({1.0, 2.0, 3.0});
  const RestrictedModel m = restricted_model(a, 1.5);
  CHECK(m.h_star == 3.0);
  CHECK(m.projection.rank() == 2u);
  CHECK(m.restricted_covariance.dimension() == 2);
  CHECK(m.rescaled_bottom == doctest::Approx(2.0 / 1.5));
  CHECK(m.rescaled_bottom >= 1.0);
  // h = 2: the atom 2 sits on the open endpoint and is excluded.
  CHECK(restricted_model(a, 2.0).projection.rank() == 1u);
  CHECK(kind_of([&] { restricted_model(a, 3.0); }) == ErrorKind::ScaleOutOfRange);
  CHECK(kind_of([&] { restricted_model(a, 1.0); }) == ErrorKind::ScaleOutOfRange);

  Vector e1 = Vector::Zero(3);
  e1[0] = 1.0;
  CHECK(kind_of([&] { m.compress(e1); }) == ErrorKind::VectorOutsideSubspace);
}

TEST_CASE("projections shrink as h grows") {
  const OperatorSpec a = OperatorSpec::diagonal({1.2, 1.7, 2.4, 3.0});
  const RestrictedModel lo = restricted_model(a, 1.3);
  const RestrictedModel hi = restricted_model(a, 2.5);
  CHECK(is_subprojection(hi.projection, lo.projection));
  CHECK_FALSE(is_subprojection(lo.projection, hi.projection));
}

TEST_CASE("non-regular extension is 0 off H_h and quasi-free on it") {
  const OperatorSpec a = OperatorSpec::diagonal({1.5, 3.0});
  const StateFunctional tilde = nonregular_state(a, 2.0);
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  CHECK(tilde(Vector::Zero(2)) == Complex(1.0));
  for (double t : {1e-9, 0.1, 1.0}) CHECK(tilde(t * e1) == Complex(0.0));
  // On H_h the covariance is 3 / 2.
  CHECK(std::abs(tilde(0.7 * e2) - std::exp(-1.5 * 0.49 / 4)) < 1e-15);
  Rng rng(6);
  std::vector<Vector> inside;
  for (int k = 0; k < 6; ++k) inside.push_back(random_vector(rng, 1)[0] * e2);
  CHECK(check_sigma_h_positivity(tilde, inside, 1.0).positive);
}

TEST_CASE("restricted KMS data for the scalar ln2 model") {
  const KmsModel base = make_kms_model(OperatorSpec::diagonal({std::numbers::ln2}), 1.0);
  for (double h : {1.5, 2.0, 2.5}) {
    const RestrictedModel m = restricted_model(base, h);
    REQUIRE(m.kms);
    CHECK(m.kms->lambda_star == lambda_star(h, 1.0));
    CHECK(op_norm(m.kms->modular) < m.kms->lambda_star);
    CHECK(m.kms->route_discrepancy <= 1e-12);
    const CorrespondenceReport c =
        spectral_correspondence_check(base.covariance, base.hamiltonian, 1.0, h);
    CHECK(c.equal);
    Vector f(1), g(1);
    f << Complex(0.6, -0.2);
    g << Complex(0.1, 0.5);
    CHECK(restricted_kms_residuals(m, f, g, default_t_grid(), RestrictedDynamics::Restricted)
              .max_residual() <= 1e-10);
    CHECK(restricted_kms_residuals(m, f, g, default_t_grid(),
                                   RestrictedDynamics::RescaledRestricted)
              .max_residual() <= 1e-10);
  }
}

TEST_CASE("spectral correspondence on a two-mode model with an excluded atom") {
  // A = diag(3, 3/2); for h = 2 only the atom 3 survives.
  const KmsModel base =
      make_kms_model(OperatorSpec::diagonal({std::numbers::ln2, std::log(5.0)}), 1.0);
  const CorrespondenceReport c =
      spectral_correspondence_check(base.covariance, base.hamiltonian, 1.0, 2.0);
  CHECK(c.equal);
  CHECK(c.covariance_side == std::vector<bool>{false, true});
  const KmsModel other = make_kms_model(OperatorSpec::diagonal({1.0, 2.0}), 1.0);
  CHECK(kind_of([&] {
          spectral_correspondence_check(base.covariance, other.hamiltonian, 1.0, 2.0);
        }) == ErrorKind::ModelMismatch);
}

TEST_CASE("trace state is tracial on words") {
  Rng rng(42);
  std::vector<std::pair<WeylWord, WeylWord>> pairs;
  for (int k = 0; k < 30; ++k) {
    WeylWord u = random_word(rng, 2, 3);
    WeylWord v = random_word(rng, 2, 2);
    const auto t = u.terms().front();
    v += weyl_adjoint(WeylWord::generator(t.vector, t.coefficient));
    pairs.emplace_back(u, v);
  }
  CHECK(check_trace_property(trace_state(), pairs) == 0.0);
  // A quasi-free state is not tracial.
  const StateFunctional fock = quasi_free_functional(OperatorSpec::diagonal({1.0, 1.0}));
  CHECK(check_trace_property(fock, pairs) > 1e-3);
}

TEST_CASE("limit towards the trace state") {
  const OperatorSpec a = OperatorSpec::diagonal({1.5, 3.0});
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1[0] = 0.5;
  e2[1] = 0.5;
  const std::vector<double> grid{1.2, 2.0, 2.9, 3.0, 5.0};
  const LimitSequence low = limit_to_trace_state(a, e1, grid);
  CHECK_FALSE(low.top_eigenspace_mass);
  CHECK(low.values[0] != Complex(0.0));
  CHECK(low.values[1] == Complex(0.0));
  CHECK(low.eventually_zero);
  const LimitSequence top = limit_to_trace_state(a, e2, grid);
  CHECK(top.top_eigenspace_mass);
  CHECK(std::abs(top.values[2] - std::exp(-3.0 / 2.9 * 0.25 / 4)) < 1e-15);
  CHECK(top.values[3] == Complex(0.0));
  CHECK_THROWS_AS(limit_to_trace_state(a, e1, {2.0, 1.5}), Error);
}

}
