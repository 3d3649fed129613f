#include "weylscale/sampling.hpp"

#include <cmath>

namespace weylscale {

namespace {

Complex complex_normal(Rng& rng, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma / std::sqrt(2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace

Vector random_vector(Rng& rng, std::size_t dim, double scale) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = complex_normal(rng, scale);
  return v;
}

Vector random_vector_in_ball(Rng& rng, std::size_t dim, double radius) {
  Vector v = random_vector(rng, dim);
  while (v.norm() == 0.0) v = random_vector(rng, dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::pow(unit(rng), 1.0 / (2.0 * static_cast<double>(dim)));
  return v * (r / v.norm());
}

std::vector<Vector> random_vectors(Rng& rng, std::size_t dim, std::size_t count, double scale) {
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_vector(rng, dim, scale));
  return out;
}

Matrix random_unitary(Rng& rng, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) z(j, k) = complex_normal(rng, 1.0);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so that Q is Haar distributed.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

WeylWord random_word(Rng& rng, std::size_t dim, std::size_t terms, double scale) {
  WeylWord w(dim);
  for (std::size_t i = 0; i < terms; ++i) {
    w.add(random_vector(rng, dim, scale), complex_normal(rng, 1.0));
  }
  return w;
}

}  // namespace weylscale
