#pragma once

// Finite Weyl words: complex-linear combinations of generators W_f over a
// complex one-particle space C^n, multiplied with the rescaled rule
//
//   W_f W_g = exp(-(i/2) h sigma(f, g)) W_{f+g},   sigma(f, g) = Im <f, g>.

#include <cstddef>
#include <map>
#include <vector>

#include "weylscale/spectral.hpp"

namespace weylscale {

// Key grid used to identify generators whose vectors agree up to rounding.
inline constexpr double kWordKeyGrid = 1e-12;

// sigma(f, g) = Im <f, g>; exactly antisymmetric in floating point.
double symplectic_form(const Vector& f, const Vector& g);

// sigma_h(f, g) = h * sigma(f, g).
inline double symplectic_form(const Vector& f, const Vector& g, double h) {
  return h * symplectic_form(f, g);
}

// True when every component of f rounds to zero on the key grid.
bool is_zero_vector(const Vector& f);

class WeylWord {
 public:
  struct Term {
    Vector vector;
    Complex coefficient;
  };
  using Key = std::vector<long long>;

  explicit WeylWord(std::size_t dimension);

  static WeylWord identity(std::size_t dimension);
  static WeylWord generator(const Vector& f, Complex coefficient = 1.0);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  // Adds c W_f, merging with an existing generator on the same key. Terms
  // whose coefficient becomes exactly zero are dropped.
  void add(const Vector& f, Complex coefficient);

  // Coefficient of W_f (0 when absent).
  Complex coefficient(const Vector& f) const;

  // Terms in key order.
  std::vector<Term> terms() const;

  WeylWord& operator+=(const WeylWord& other);
  WeylWord& operator*=(Complex scalar);
  friend WeylWord operator+(WeylWord a, const WeylWord& b) { return a += b; }
  friend WeylWord operator*(Complex s, WeylWord a) { return a *= s; }

  static Key key_of(const Vector& f);

 private:
  std::size_t dimension_;
  std::map<Key, Term> terms_;
};

// Bilinear extension of the generator rule at scale h. Throws DimensionMismatch.
WeylWord weyl_multiply(const WeylWord& u, const WeylWord& v, double h);

// (c W_f)* = conj(c) W_{-f}.
WeylWord weyl_adjoint(const WeylWord& u);

enum class IsoDirection { Forward, Inverse };

// Forward: W_f -> W_{sqrt(h) f} (sigma_h-algebra to sigma-algebra).
// Inverse: W_f -> W_{f / sqrt(h)} (the rescaling map tau_h).
// Throws NonPositiveScale for h <= 0.
WeylWord gamma_iso(const WeylWord& u, double h, IsoDirection direction);

// Generators closer than this (max-norm) are identified by word_distance, so
// rounding in the vectors cannot split a term across key cells.
inline constexpr double kWordMatchTolerance = 1e-9;

// Largest coefficient difference over the union of generators.
double word_distance(const WeylWord& u, const WeylWord& v);

}  // namespace weylscale
