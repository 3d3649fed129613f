#include <cmath>
#include <limits>

#include "doctest.h"
#include "weylscale/error.hpp"
#include "weylscale/sampling.hpp"
#include "weylscale/spectral.hpp"

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

TEST_SUITE("spectral") {

TEST_CASE("2x2 Hermitian eigensolve against the characteristic polynomial") {
  // [[2, 1-i], [1+i, 3]]: trace 5, det 4, so eigenvalues 1 and 4.
  Matrix m(2, 2);
  m << 2.0, Complex(1, -1), Complex(1, 1), 3.0;
  const OperatorSpec a = OperatorSpec::from_matrix(m);
  CHECK(a.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.eigenvalues()[1] == doctest::Approx(4.0).epsilon(1e-14));
  const Matrix& v = a.eigenvectors();
  CHECK((v.adjoint() * v - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((v * a.eigenvalues().cast<Complex>().asDiagonal() * v.adjoint() - m).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(inf_spectrum(a) == doctest::Approx(1.0));
  CHECK(op_norm(a) == doctest::Approx(4.0));
}

TEST_CASE("non-Hermitian input and non-positive atoms are rejected") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  CHECK(kind_of([&] { OperatorSpec::from_matrix(m); }) == ErrorKind::NonHermitian);
  CHECK(kind_of([] { OperatorSpec::from_atoms({{0.0, Multiplicity::finite(1)}}); }) ==
        ErrorKind::NonPositiveAtom);
}

TEST_CASE("functional calculus keeps eigenvectors") {
  const OperatorSpec a = OperatorSpec::diagonal({4.0, 9.0});
  const OperatorSpec r = apply_function(a, ScalarMap::power(0.5));
  CHECK(r.eigenvalues()[0] == 2.0);
  CHECK(r.eigenvalues()[1] == 3.0);
  CHECK((r.matrix() * r.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  Rng rng(1);
  const Matrix u = random_unitary(rng, 3);
  const Matrix h = u * RealVector(Eigen::Vector3d(1.5, 2.0, 4.0)).cast<Complex>().asDiagonal() *
                   u.adjoint();
  const OperatorSpec b = OperatorSpec::from_matrix(h);
  const OperatorSpec sq = apply_function(b, ScalarMap::power(2.0));
  CHECK((sq.matrix() - h * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decreasing maps swap the spectral limits") {
  // Hamiltonian with atom 1 and spectrum unbounded above.
  const OperatorSpec h = OperatorSpec::from_atoms(
      {{1.0, Multiplicity::finite(1)}}, {std::nullopt, std::numeric_limits<double>::infinity()});
  const OperatorSpec a = apply_function(h, ScalarMap::thermal_covariance(1.0));
  REQUIRE(a.limits().lower.has_value());
  CHECK(*a.limits().lower == 1.0);
  CHECK(inf_spectrum(a) == 1.0);
  CHECK(op_norm(a) == doctest::Approx((1 + std::exp(-1.0)) / (1 - std::exp(-1.0))));
}

TEST_CASE("trace-class test for A - I") {
  CHECK(is_trace_class_minus_identity(OperatorSpec::identity_atoms()));
  CHECK(is_trace_class_minus_identity(OperatorSpec::from_atoms(
      {{1.0, Multiplicity::infinite()}, {5.0, Multiplicity::finite(2)}})));
  CHECK_FALSE(is_trace_class_minus_identity(
      OperatorSpec::from_atoms({{2.0, Multiplicity::infinite()}})));
  CHECK(kind_of([] {
          is_trace_class_minus_identity(OperatorSpec::from_atoms({{0.5, Multiplicity::finite(1)}}));
        }) == ErrorKind::SpectrumBelowOne);
}

TEST_CASE("spectral projections respect endpoint inclusion exactly") {
  const OperatorSpec a = OperatorSpec::diagonal({1.0, 2.0, 3.0});
  CHECK(spectral_projection(a, Interval::open_closed(2.0, 3.0)).rank() == 1u);
  CHECK(spectral_projection(a, Interval::closed(2.0, 3.0)).rank() == 2u);
  CHECK(spectral_projection(a, Interval::closed_open(2.0, 3.0)).rank() == 1u);
  CHECK(spectral_projection(a, Interval::open_closed(3.0, 3.0)).empty());
  const ProjectionSpec p = spectral_projection(a, Interval::open_closed(1.0, 3.0));
  CHECK((p.projector * p.projector - p.projector).cwiseAbs().maxCoeff() < 1e-15);
  Vector e3 = Vector::Zero(3);
  e3[2] = 1.0;
  CHECK(p.membership_residual(e3) < 1e-15);
  Vector e1 = Vector::Zero(3);
  e1[0] = 1.0;
  CHECK(p.membership_residual(e1) == doctest::Approx(1.0));

  const OperatorSpec atoms = OperatorSpec::from_atoms(
      {{1.0, Multiplicity::infinite()}, {3.0, Multiplicity::finite(2)}});
  CHECK(spectral_projection(atoms, Interval::open_closed(1.0, 3.0)).rank() == 2u);
  CHECK_FALSE(spectral_projection(atoms, Interval::closed(1.0, 3.0)).rank().has_value());
}

TEST_CASE("imaginary powers are unitary") {
  const OperatorSpec d = OperatorSpec::diagonal({2.0, 5.0});
  const Matrix u = complex_power(d, Complex(0.0, 0.7));
  CHECK((u.adjoint() * u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(u(0, 0) - std::exp(Complex(0.0, 0.7 * std::log(2.0)))) < 1e-15);
}

TEST_CASE("multiplicities and spectral distance") {
  CHECK((Multiplicity::finite(2) + Multiplicity::infinite()).is_infinite());
  CHECK((Multiplicity::finite(2) + Multiplicity::finite(3)).count() == 5u);
  CHECK(kind_of([] { Multiplicity::infinite().count(); }) == ErrorKind::OutOfRange);
  const OperatorSpec a = OperatorSpec::diagonal({1.0, 2.0});
  const OperatorSpec b = OperatorSpec::diagonal({1.0, 2.5});
  CHECK(spectral_distance(a, b) == doctest::Approx(0.5));
  CHECK(std::isinf(spectral_distance(a, OperatorSpec::diagonal({1.0, 1.0}))));
}

TEST_CASE("dimension is unavailable on the atom form") {
  CHECK(kind_of([] { OperatorSpec::identity_atoms().dimension(); }) ==
        ErrorKind::SpectralVariantHasNoVectors);
}

}
