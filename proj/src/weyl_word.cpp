#include "weylscale/weyl_word.hpp"

#include <cmath>
#include <set>

#include "weylscale/error.hpp"

namespace weylscale {

namespace {

long long grid_index(double x) {
  const double scaled = std::round(x / kWordKeyGrid);
  if (!(std::abs(scaled) < 9.0e18)) {
    throw Error(ErrorKind::OutOfRange, "generator component too large for the key grid");
  }
  return static_cast<long long>(scaled);
}

void require_same_dimension(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                "words over spaces of dimension " + std::to_string(a) + " and " +
                    std::to_string(b));
  }
}

}  // namespace

double symplectic_form(const Vector& f, const Vector& g) {
  if (f.size() != g.size()) throw Error(ErrorKind::DimensionMismatch, "symplectic form");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    acc += f[k].real() * g[k].imag() - f[k].imag() * g[k].real();
  }
  return acc;
}

bool is_zero_vector(const Vector& f) {
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (grid_index(f[k].real()) != 0 || grid_index(f[k].imag()) != 0) return false;
  }
  return true;
}

WeylWord::WeylWord(std::size_t dimension) : dimension_(dimension) {}

WeylWord WeylWord::identity(std::size_t dimension) {
  WeylWord w(dimension);
  w.add(Vector::Zero(static_cast<Eigen::Index>(dimension)), 1.0);
  return w;
}

WeylWord WeylWord::generator(const Vector& f, Complex coefficient) {
  WeylWord w(static_cast<std::size_t>(f.size()));
  w.add(f, coefficient);
  return w;
}

WeylWord::Key WeylWord::key_of(const Vector& f) {
  Key key;
  key.reserve(static_cast<std::size_t>(2 * f.size()));
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    key.push_back(grid_index(f[k].real()));
    key.push_back(grid_index(f[k].imag()));
  }
  return key;
}

void WeylWord::add(const Vector& f, Complex coefficient) {
  require_same_dimension(dimension_, static_cast<std::size_t>(f.size()));
  if (coefficient == Complex(0.0)) return;
  auto key = key_of(f);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), Term{f, coefficient});
    return;
  }
  it->second.coefficient += coefficient;
  if (it->second.coefficient == Complex(0.0)) terms_.erase(it);
}

Complex WeylWord::coefficient(const Vector& f) const {
  auto it = terms_.find(key_of(f));
  return it == terms_.end() ? Complex(0.0) : it->second.coefficient;
}

std::vector<WeylWord::Term> WeylWord::terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [key, term] : terms_) out.push_back(term);
  return out;
}

WeylWord& WeylWord::operator+=(const WeylWord& other) {
  require_same_dimension(dimension_, other.dimension_);
  for (const auto& [key, term] : other.terms_) add(term.vector, term.coefficient);
  return *this;
}

WeylWord& WeylWord::operator*=(Complex scalar) {
  if (scalar == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, term] : terms_) term.coefficient *= scalar;
  return *this;
}

WeylWord weyl_multiply(const WeylWord& u, const WeylWord& v, double h) {
  require_same_dimension(u.dimension(), v.dimension());
  WeylWord out(u.dimension());
  const Complex minus_half_i(0.0, -0.5);
  for (const auto& a : u.terms()) {
    for (const auto& b : v.terms()) {
      const Complex phase = std::exp(minus_half_i * symplectic_form(a.vector, b.vector, h));
      out.add(a.vector + b.vector, a.coefficient * b.coefficient * phase);
    }
  }
  return out;
}

WeylWord weyl_adjoint(const WeylWord& u) {
  WeylWord out(u.dimension());
  for (const auto& t : u.terms()) out.add(-t.vector, std::conj(t.coefficient));
  return out;
}

WeylWord gamma_iso(const WeylWord& u, double h, IsoDirection direction) {
  if (!(h > 0)) throw Error(ErrorKind::NonPositiveScale, "gamma_iso requires h > 0");
  const double root = std::sqrt(h);
  WeylWord out(u.dimension());
  for (const auto& t : u.terms()) {
    const Vector mapped = direction == IsoDirection::Forward ? Vector(root * t.vector)
                                                             : Vector(t.vector / root);
    out.add(mapped, t.coefficient);
  }
  return out;
}

namespace {

// Sum of the coefficients of v whose vectors lie within kWordMatchTolerance of f.
Complex nearby_coefficient(const std::vector<WeylWord::Term>& terms, const Vector& f) {
  Complex sum = 0.0;
  for (const auto& t : terms) {
    if ((t.vector - f).cwiseAbs().maxCoeff() <= kWordMatchTolerance) sum += t.coefficient;
  }
  return sum;
}

}  // namespace

double word_distance(const WeylWord& u, const WeylWord& v) {
  require_same_dimension(u.dimension(), v.dimension());
  const auto ut = u.terms();
  const auto vt = v.terms();
  double worst = 0.0;
  for (const auto& t : ut) {
    worst = std::max(worst, std::abs(nearby_coefficient(ut, t.vector) - nearby_coefficient(vt, t.vector)));
  }
  for (const auto& t : vt) {
    worst = std::max(worst, std::abs(nearby_coefficient(ut, t.vector) - nearby_coefficient(vt, t.vector)));
  }
  return worst;
}

}  // namespace weylscale
