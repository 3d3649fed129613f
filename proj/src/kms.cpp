#include "weylscale/kms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weylscale/error.hpp"

namespace weylscale {

namespace {

void require_beta(double beta) {
  if (!(beta > 0)) throw Error(ErrorKind::NonPositiveBeta, "beta must be positive");
}

void require_pair(const OperatorSpec& a, const OperatorSpec& delta, const Vector& f,
                  const Vector& g) {
  const auto n = static_cast<Eigen::Index>(a.dimension());
  if (static_cast<Eigen::Index>(delta.dimension()) != n || f.size() != n || g.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "KMS operands have different dimensions");
  }
  const Matrix& am = a.matrix();
  const Matrix& dm = delta.matrix();
  const double scale = std::max(1.0, am.cwiseAbs().maxCoeff() * dm.cwiseAbs().maxCoeff());
  if ((am * dm - dm * am).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::ModelMismatch, "A and Delta do not commute");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double max_of(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, x);
  return worst;
}

}  // namespace

OperatorSpec covariance_from_hamiltonian(const OperatorSpec& hamiltonian, double beta) {
  require_beta(beta);
  if (!(inf_spectrum(hamiltonian) > 0)) {
    throw Error(ErrorKind::NonPositiveHamiltonian,
                "inf spec(h) = " + fmt(inf_spectrum(hamiltonian)));
  }
  return apply_function(hamiltonian, ScalarMap::thermal_covariance(beta));
}

OperatorSpec modular_operator(const OperatorSpec& covariance, double beta) {
  require_beta(beta);
  return apply_function(covariance, ScalarMap::modular(beta));
}

Matrix time_evolution(const OperatorSpec& modular, double t) {
  return complex_power(modular, Complex(0.0, t));
}

WeylWord evolve_word(const WeylWord& u, const OperatorSpec& modular, double t) {
  const Matrix tt = time_evolution(modular, t);
  if (static_cast<std::size_t>(tt.rows()) != u.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "word does not match the modular operator");
  }
  WeylWord out(u.dimension());
  for (const auto& term : u.terms()) out.add(tt * term.vector, term.coefficient);
  return out;
}

KmsModel make_kms_model(const OperatorSpec& hamiltonian, double beta) {
  OperatorSpec a = covariance_from_hamiltonian(hamiltonian, beta);
  OperatorSpec delta = modular_operator(a, beta);
  return {hamiltonian, beta, inf_spectrum(hamiltonian), std::move(a), std::move(delta)};
}

double thermal_covariance_norm(double epsilon, double beta) {
  const double x = std::exp(beta * epsilon);
  return (x + 1.0) / (x - 1.0);
}

Complex F_function(const OperatorSpec& a, const OperatorSpec& delta, const Vector& f,
                   const Vector& g, double t) {
  require_pair(a, delta, f, g);
  const auto n = static_cast<Eigen::Index>(a.dimension());
  const Matrix id = Matrix::Identity(n, n);
  const Matrix forward = time_evolution(delta, t);
  const Matrix backward = time_evolution(delta, -t);
  return 0.5 * f.dot(forward * ((a.matrix() + id) * g)) +
         0.5 * g.dot(backward * ((a.matrix() - id) * f));
}

Complex Phi_function(const OperatorSpec& a, const OperatorSpec& delta, double beta,
                     const Vector& f, const Vector& g, Complex z) {
  require_beta(beta);
  if (z.imag() < 0.0 || z.imag() > beta) {
    throw Error(ErrorKind::OutsideStrip, "Im z = " + fmt(z.imag()) + " outside [0, beta]");
  }
  require_pair(a, delta, f, g);
  const auto n = static_cast<Eigen::Index>(a.dimension());
  const Matrix id = Matrix::Identity(n, n);
  const Complex i(0.0, 1.0);
  const Matrix up = complex_power(delta, i * z);
  const Matrix down = complex_power(delta, -i * z);
  return 0.5 * f.dot((a.matrix() + id) * (up * g)) + 0.5 * g.dot((a.matrix() - id) * (down * f));
}

TwoPointFunction two_point_function(const OperatorSpec& a, const OperatorSpec& delta,
                                    const Vector& f, const Vector& g, double t) {
  const Complex big_f = F_function(a, delta, f, g, t);
  const double sff = quadratic_form(a, f, f).real();
  const double sgg = quadratic_form(a, g, g).real();
  TwoPointFunction out;
  out.printed_form = std::exp(0.25 * sff - 0.25 * sgg - 0.5 * big_f);
  out.quasi_free_form = std::exp(-0.25 * sff - 0.25 * sgg - 0.5 * big_f);
  out.forms_disagree = std::abs(out.printed_form - out.quasi_free_form) >
                       1e-12 * std::max(1.0, std::abs(out.quasi_free_form));
  return out;
}

double KmsWitnessReport::max_r0() const { return max_of(r0); }
double KmsWitnessReport::max_r_beta() const { return max_of(r_beta); }

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
  std::vector<double> grid;
  if (count == 0) return grid;
  if (count == 1) return {start};
  grid.reserve(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid.push_back(start + step * static_cast<double>(k));
  grid.back() = stop;
  return grid;
}

std::vector<double> default_t_grid() { return linear_grid(-5.0, 5.0, 21); }

KmsWitnessReport boundary_residuals(const OperatorSpec& a, const OperatorSpec& delta, double beta,
                                    const Vector& f, const Vector& g,
                                    const std::vector<double>& t_grid) {
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) {
      throw Error(ErrorKind::OutOfRange, "t grid must be strictly increasing");
    }
  }
  KmsWitnessReport report;
  report.f = f;
  report.g = g;
  report.t_grid = t_grid;
  for (double t : t_grid) {
    const Complex big_f = F_function(a, delta, f, g, t);
    const Complex lower = Phi_function(a, delta, beta, f, g, Complex(t, 0.0));
    const Complex swapped = F_function(a, delta, g, f, -t);
    const Complex upper = Phi_function(a, delta, beta, f, g, Complex(t, beta));
    report.F_values.push_back(big_f);
    report.Phi_lower.push_back(lower);
    report.F_swapped.push_back(swapped);
    report.Phi_upper.push_back(upper);
    report.r0.push_back(std::abs(lower - big_f));
    report.r_beta.push_back(std::abs(upper - swapped));
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Complex value = Phi_function(a, delta, beta, f, g, Complex(t, frac * beta));
      report.strip_sup = std::max(report.strip_sup, std::abs(value));
    }
  }
  return report;
}

KmsWitnessReport kms_boundary_residuals(const KmsModel& model, const Vector& f, const Vector& g,
                                        const std::vector<double>& t_grid) {
  return boundary_residuals(model.covariance, model.modular, model.beta, f, g, t_grid);
}

double j_h_function(double lambda, double h, double beta) {
  if (!(h > 0)) throw Error(ErrorKind::OutOfRange, "j_h needs h > 0");
  if (!(beta > 0)) throw Error(ErrorKind::OutOfRange, "j_h needs beta > 0");
  if (!(lambda >= 1.0)) throw Error(ErrorKind::OutOfRange, "j_h needs lambda >= 1");
  const double p = std::pow(lambda, beta);
  const double denominator = 1.0 + h + (1.0 - h) * p;
  if (!(denominator > 0)) {
    throw Error(ErrorKind::OutOfRange,
                "j_h pole: lambda = " + fmt(lambda) + " is not below lambda_* for h = " + fmt(h));
  }
  return std::pow((1.0 - h + (1.0 + h) * p) / denominator, 1.0 / beta);
}

ScalarMap j_h_map(double h, double beta) {
  std::optional<double> at_inf;
  if (h < 1.0) at_inf = std::pow((1.0 + h) / (1.0 - h), 1.0 / beta);
  if (h == 1.0) at_inf = std::numeric_limits<double>::infinity();
  return {"j_h(h=" + fmt(h) + ",beta=" + fmt(beta) + ")",
          [h, beta](double lambda) { return j_h_function(lambda, h, beta); },
          Monotonicity::Increasing, at_inf};
}

RescaledKmsModel rescaled_modular(const KmsModel& model, double h) {
  if (!(h > 0.0 && h <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "rescaled KMS model needs h in (0, 1], got " + fmt(h));
  }
  OperatorSpec a_h = apply_function(model.covariance, ScalarMap::scale(1.0 / h));
  OperatorSpec via_j = apply_function(model.modular, j_h_map(h, model.beta));
  OperatorSpec direct = modular_operator(a_h, model.beta);
  double discrepancy = spectral_distance(via_j, direct);
  if (via_j.is_matrix()) {
    discrepancy = std::max(discrepancy, (via_j.matrix() - direct.matrix()).cwiseAbs().maxCoeff());
  }
  OperatorSpec generator = apply_function(via_j, ScalarMap::log());
  const double delta = std::log(j_h_function(inf_spectrum(model.modular), h, model.beta));
  return {model, h, std::move(a_h), std::move(via_j), std::move(direct), std::move(generator),
          delta, discrepancy};
}

Complex F_h_function(const RescaledKmsModel& model, const Vector& f, const Vector& g, double t) {
  return F_function(model.covariance, model.modular, f, g, t);
}

Complex Phi_h_function(const RescaledKmsModel& model, const Vector& f, const Vector& g,
                       Complex z) {
  return Phi_function(model.covariance, model.modular, model.base.beta, f, g, z);
}

KmsWitnessReport rescaled_kms_residuals(const RescaledKmsModel& model, const Vector& f,
                                        const Vector& g, const std::vector<double>& t_grid) {
  return boundary_residuals(model.covariance, model.modular, model.base.beta, f, g, t_grid);
}

double modular_exponential_residual(const KmsModel& model) {
  const OperatorSpec expected = apply_function(model.hamiltonian, ScalarMap::exp());
  double residual = spectral_distance(model.modular, expected);
  if (expected.is_matrix()) {
    residual = std::max(residual,
                        (model.modular.matrix() - expected.matrix()).cwiseAbs().maxCoeff());
  }
  return residual;
}

}  // namespace weylscale
