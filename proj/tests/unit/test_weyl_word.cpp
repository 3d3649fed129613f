#include <cmath>

#include "doctest.h"
#include "weylscale/error.hpp"
#include "weylscale/sampling.hpp"
#include "weylscale/weyl_word.hpp"

using namespace weylscale;

TEST_SUITE("weyl_word") {

TEST_CASE("symplectic form is exactly antisymmetric") {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Vector f = random_vector(rng, 3);
    const Vector g = random_vector(rng, 3);
    CHECK(symplectic_form(f, g) == -symplectic_form(g, f));
    CHECK(symplectic_form(f, -f) == 0.0);
    CHECK(symplectic_form(f, g) == doctest::Approx(f.dot(g).imag()).epsilon(1e-12));
  }
}

TEST_CASE("generator product carries the rescaled phase") {
  Vector f(1), g(1);
  f << 1.0;
  g << Complex(0.0, 1.0);
  // sigma(f, g) = Im(1 * i) = 1.
  for (double h : {1.0, 0.5, 2.0}) {
    const WeylWord p = weyl_multiply(WeylWord::generator(f), WeylWord::generator(g), h);
    REQUIRE(p.size() == 1);
    const Vector sum = f + g;
    CHECK(std::abs(p.coefficient(sum) - std::exp(Complex(0.0, -0.5 * h))) < 1e-15);
  }
}

TEST_CASE("product is associative and adjoint is anti-multiplicative") {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const WeylWord u = random_word(rng, 2, 3);
    const WeylWord v = random_word(rng, 2, 2);
    const WeylWord w = random_word(rng, 2, 2);
    const double h = 0.7;
    CHECK(word_distance(weyl_multiply(weyl_multiply(u, v, h), w, h),
                        weyl_multiply(u, weyl_multiply(v, w, h), h)) < 1e-12);
    CHECK(word_distance(weyl_adjoint(weyl_multiply(u, v, h)),
                        weyl_multiply(weyl_adjoint(v), weyl_adjoint(u), h)) < 1e-12);
  }
}

TEST_CASE("gamma_h intertwines the sigma_h and sigma products") {
  Rng rng(21);
  for (double h : {0.3, 1.0, 2.5}) {
    const WeylWord u = random_word(rng, 2, 3);
    const WeylWord v = random_word(rng, 2, 3);
    const WeylWord lhs = gamma_iso(weyl_multiply(u, v, h), h, IsoDirection::Forward);
    const WeylWord rhs = weyl_multiply(gamma_iso(u, h, IsoDirection::Forward),
                                       gamma_iso(v, h, IsoDirection::Forward), 1.0);
    CHECK(word_distance(lhs, rhs) < 1e-12);
    const WeylWord back =
        gamma_iso(gamma_iso(u, h, IsoDirection::Forward), h, IsoDirection::Inverse);
    CHECK(word_distance(back, u) < 1e-12);
  }
}

TEST_CASE("terms merge on the key grid and cancel exactly") {
  Vector f(1);
  f << 0.5;
  WeylWord w(1);
  w.add(f, 2.0);
  w.add(f, -2.0);
  CHECK(w.empty());
  w.add(f, 1.0);
  w.add(f, Complex(0.0, 1.0));
  CHECK(w.size() == 1);
  CHECK(w.coefficient(f) == Complex(1.0, 1.0));
}

TEST_CASE("invalid scales and dimensions") {
  const WeylWord u = WeylWord::identity(2);
  CHECK_THROWS_AS(gamma_iso(u, 0.0, IsoDirection::Forward), Error);
  CHECK_THROWS_AS(weyl_multiply(u, WeylWord::identity(3), 1.0), Error);
  try {
    gamma_iso(u, -1.0, IsoDirection::Inverse);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveScale);
  }
}

}
