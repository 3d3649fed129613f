#pragma once

// Seeded random generators for vectors, unitaries and words. All draws go
// through std::mt19937_64 so a fixed seed reproduces a run exactly.

#include <cstdint>
#include <random>
#include <vector>

#include "weylscale/spectral.hpp"
#include "weylscale/weyl_word.hpp"

namespace weylscale {

using Rng = std::mt19937_64;

// Components i.i.d. complex Gaussian with E|z_k|^2 = scale^2.
Vector random_vector(Rng& rng, std::size_t dim, double scale = 1.0);

// Uniform in the ball of radius `radius` (direction and radius drawn separately).
Vector random_vector_in_ball(Rng& rng, std::size_t dim, double radius);

std::vector<Vector> random_vectors(Rng& rng, std::size_t dim, std::size_t count,
                                   double scale = 1.0);

// Haar-distributed unitary via QR of a complex Ginibre matrix.
Matrix random_unitary(Rng& rng, std::size_t dim);

// Sum of `terms` generators with random vectors (scale) and coefficients.
WeylWord random_word(Rng& rng, std::size_t dim, std::size_t terms, double scale = 1.0);

}  // namespace weylscale
