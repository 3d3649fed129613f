#include <cmath>

#include "doctest.h"
#include "weylscale/error.hpp"
#include "weylscale/fock_gns.hpp"
#include "weylscale/sampling.hpp"

using namespace weylscale;

TEST_SUITE("fock_gns") {

TEST_CASE("truncated annihilation operator") {
  const Matrix a = truncated_annihilation(5);
  CHECK(a.rows() == 6);
  for (int n = 1; n <= 5; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(n)));
  CHECK(a(0, 0) == Complex(0.0));
}

TEST_CASE("displacement is unitary and has the coherent vacuum element") {
  const Complex alpha(0.3, -0.4);
  const Matrix d = single_mode_displacement(alpha, 40);
  CHECK((d.adjoint() * d - Matrix::Identity(41, 41)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(d(0, 0) - std::exp(-std::norm(alpha) / 2)) < 1e-12);
  // <1|D|0> = alpha exp(-|alpha|^2/2)
  CHECK(std::abs(d(1, 0) - alpha * std::exp(-std::norm(alpha) / 2)) < 1e-12);
  CHECK_THROWS_AS(single_mode_displacement(alpha, 3), Error);
}

TEST_CASE("GNS vacuum expectation reproduces the quasi-free functional") {
  Rng rng(12);
  for (double a : {1.0, 1.5, 2.0, 3.0}) {
    const OperatorSpec cov = OperatorSpec::diagonal({a});
    const GnsModel model(cov, 40);
    for (int k = 0; k < 5; ++k) {
      const Vector f = random_vector_in_ball(rng, 1, 1.0);
      const Vector g = random_vector_in_ball(rng, 1, 1.0);
      const Complex value = gns_expectation(model, WeylWord::generator(f));
      CHECK(std::abs(value - std::exp(-a * f.squaredNorm() / 4)) <= 1e-5);
      CHECK(weyl_relation_residual(model, f, g) <= 1e-5);
      CHECK(commutant_residual(model, f, g) <= 1e-5);
    }
  }
}

TEST_CASE("matrix product of GNS operators agrees with the symbolic product") {
  const OperatorSpec cov = OperatorSpec::diagonal({2.0});
  const GnsModel model(cov, 40);
  Vector f(1), g(1);
  f << Complex(0.3, 0.1);
  g << Complex(-0.2, 0.4);
  const std::vector<WeylWord> factors{WeylWord::generator(f), WeylWord::generator(g)};
  const Complex direct = gns_expectation(model, factors);
  const Complex symbolic = gns_expectation(model, weyl_multiply(factors[0], factors[1], 1.0));
  CHECK(std::abs(direct - symbolic) < 1e-10);
}

TEST_CASE("two-mode GNS with a non-diagonal covariance") {
  Matrix m(2, 2);
  m << 2.0, Complex(0.3, 0.2), Complex(0.3, -0.2), 1.5;
  const OperatorSpec cov = OperatorSpec::from_matrix(m);
  const GnsModel model(cov, 12);
  Vector f(2);
  f << Complex(0.2, -0.1), Complex(0.1, 0.15);
  const Complex value = gns_expectation(model, WeylWord::generator(f));
  CHECK(std::abs(value - std::exp(-quadratic_form(cov, f, f).real() / 4)) < 1e-8);
}

TEST_CASE("one-particle number expectation") {
  const OperatorSpec cov = OperatorSpec::diagonal({2.0});
  const GnsModel model(cov, 40);
  Vector f(1);
  f << 1.0;
  CHECK(one_particle_number_expectation(cov, f) == doctest::Approx(0.5));
  CHECK(gns_number_expectation(model, f) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("rescaled Fock family") {
  CHECK(c_parameter(0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(c_parameter(1.0) == 0.0);
  CHECK(h_of_c(c_parameter(0.3)) == doctest::Approx(0.3));
  CHECK_THROWS_AS(c_parameter(1.5), Error);
  CHECK_THROWS_AS(h_of_c(1.0), Error);
  CHECK_FALSE(is_quasi_equivalent_to_fock(rescaled_fock_spectral(0.5)));
  CHECK(is_quasi_equivalent_to_fock(rescaled_fock_spectral(1.0)));
  for (int k = 1; k <= 9; ++k) {
    const double h = 0.1 * k;
    Vector f(1);
    f << 1.0;
    CHECK(std::abs(one_particle_number_expectation(rescaled_fock_covariance(h, 1), f) -
                   (1 - h) / (2 * h)) <= 1e-12);
  }
}

TEST_CASE("universally invariant states are gauge invariant") {
  Rng rng(31);
  const MixtureMeasure measure({{0.1, 0.25}, {0.5, 0.75}});
  const StateFunctional phi = universally_invariant_functional(measure);
  const UnitaryMap u(random_unitary(rng, 3));
  CHECK(check_universal_invariance(phi, u, random_vectors(rng, 3, 10)) < 1e-14);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(UnitaryMap{bad}, Error);
}

TEST_CASE("GNS model preconditions") {
  CHECK_THROWS_AS(GnsModel(OperatorSpec::diagonal({0.5}), 40), Error);
  CHECK_THROWS_AS(GnsModel(OperatorSpec::diagonal({2.0}), 2), Error);
  CHECK_THROWS_AS(GnsModel(OperatorSpec::identity_atoms(), 40), Error);
}

}
