#include "weylscale/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "weylscale/error.hpp"
#include "weylscale/fock_gns.hpp"
#include "weylscale/kms.hpp"
#include "weylscale/restriction.hpp"
#include "weylscale/sampling.hpp"
#include "weylscale/state.hpp"

namespace weylscale {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, path + ": " + what);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double tolerance_of(const ExperimentConfig& config, double fallback) {
  return config.tolerance.value_or(fallback);
}

void require_matrix(const ExperimentConfig& config, const std::string& experiment) {
  if (!config.covariance.is_matrix()) {
    invalid("operator", experiment + " needs a finite-dimensional (matrix or diagonal) operator");
  }
}

void require_h(const ExperimentConfig& config) {
  if (config.h_values.empty()) invalid("h", "empty h grid");
}

ReportRecord start(const std::string& name, const ExperimentConfig& config) {
  ReportRecord record;
  record.experiment = name;
  record.input = config.echo;
  return record;
}

void finish_cell(ReportRecord& record, Json cell, bool ok, const std::string& label) {
  cell["contract"] = ok;
  if (!ok) record.failures.push_back(label);
  record.cells.push_back(std::move(cell));
}

Json nullable(std::optional<double> x) { return x ? Json(*x) : Json(nullptr); }

std::string h_label(double h) { return "h=" + fmt(h); }

Vector unit_vector(std::size_t dim, std::size_t k) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return e;
}

}  // namespace

ReportRecord run_positivity_scan(const ExperimentConfig& config) {
  require_matrix(config, "positivity-scan");
  require_h(config);
  if (!config.has_vectors()) invalid("vectors", "empty vector set");
  const double tol = tolerance_of(config, kGramTolerance);
  const OperatorSpec& a = config.covariance;
  double hmax = 0.0;
  StateFunctional phi = StateFunctional::trace();
  try {
    hmax = h_max(a);
    phi = quasi_free_functional(a);
  } catch (const Error& e) {
    invalid("operator", e.what());
  }
  const auto sets = config.vector_sets();
  const Vector e = a.eigenvectors().col(0);
  const Vector ie = Complex(0.0, 1.0) * e;

  ReportRecord record = start("positivity-scan", config);
  std::optional<double> threshold;
  std::optional<double> first_failing;
  bool still_positive = true;
  Json witnesses = Json::array();
  for (double h : config.h_values) {
    if (!(h > 0)) invalid("h", "scales must be positive, got " + fmt(h));
    double min_eig = std::numeric_limits<double>::infinity();
    bool gram_ok = true;
    for (const auto& set : sets) {
      const GramReport g = check_sigma_h_positivity(phi, set, h, tol);
      min_eig = std::min(min_eig, g.min_eigenvalue);
      gram_ok = gram_ok && g.positive;
    }
    const TwoPointReport tp = two_point_criterion(a, e, ie, h);
    const bool expected = h <= hmax;
    WitnessScan scan;
    if (!expected) scan = negative_witness_scan(a, h);

    const bool positive = gram_ok && tp.satisfied && !scan.found;
    if (still_positive && positive) threshold = h;
    if (!positive) {
      still_positive = false;
      if (!first_failing) first_failing = h;
    }
    if (scan.found) {
      Json w;
      w["h"] = h;
      w["scale"] = scan.scale;
      w["min_eigenvalue"] = scan.min_eigenvalue;
      w["vectors"] = Json::array();
      for (const auto& v : scan.witness) w["vectors"].push_back(to_json(v));
      witnesses.push_back(std::move(w));
    }

    Json cell;
    cell["h"] = h;
    cell["expected_positive"] = expected;
    cell["gram_min_eigenvalue"] = min_eig;
    cell["gram_positive"] = gram_ok;
    cell["two_point_lhs"] = tp.lhs;
    cell["two_point_rhs"] = tp.rhs;
    cell["two_point_satisfied"] = tp.satisfied;
    cell["witness_found"] = scan.found;
    cell["witness_min_eigenvalue"] = expected ? Json(nullptr) : Json(scan.min_eigenvalue);
    const bool ok = expected ? (gram_ok && tp.satisfied) : (!tp.satisfied && scan.found);
    finish_cell(record, std::move(cell), ok, h_label(h));
  }

  std::optional<double> predicted;
  for (double h : config.h_values) {
    if (h <= hmax) predicted = h;
  }
  record.summary["h_max"] = hmax;
  record.summary["empirical_threshold"] = nullable(threshold);
  record.summary["predicted_threshold"] = nullable(predicted);
  record.summary["threshold_matches"] = threshold == predicted;
  record.summary["first_failing_h"] = nullable(first_failing);
  record.summary["gram_sets_per_h"] = sets.size();
  record.summary["witnesses"] = std::move(witnesses);
  if (threshold != predicted) record.failures.push_back("empirical threshold differs from h_max");
  return record;
}

ReportRecord run_kms_verify(const ExperimentConfig& config) {
  if (!config.kms) invalid("operator", "kms-verify needs a {\"kms\": ...} operator source");
  require_matrix(config, "kms-verify");
  const auto vectors = config.all_vectors();
  if (vectors.size() < 2) invalid("vectors", "kms-verify needs two vectors f, g");
  const double tol = tolerance_of(config, kKmsResidualTolerance);
  const KmsModel& model = *config.kms;
  const Vector& f = vectors[0];
  const Vector& g = vectors[1];
  const double h_star = op_norm(model.covariance);
  const std::vector<double> hs = config.h_values.empty() ? std::vector<double>{1.0} : config.h_values;

  ReportRecord record = start("kms-verify", config);
  const double exp_residual = modular_exponential_residual(model);
  double worst = 0.0;
  for (double h : hs) {
    Json cell;
    cell["h"] = h;
    cell["path"] = nullptr;
    cell["status"] = "ok";
    cell["max_r0"] = nullptr;
    cell["max_r_beta"] = nullptr;
    cell["strip_sup"] = nullptr;
    cell["route_discrepancy"] = nullptr;
    cell["delta"] = nullptr;
    cell["delta_exact"] = nullptr;
    cell["lambda_star"] = nullptr;
    cell["subspace_rank"] = nullptr;
    bool ok = true;
    try {
      KmsWitnessReport report;
      if (h == 1.0) {
        cell["path"] = "unrescaled";
        report = kms_boundary_residuals(model, f, g, config.t_grid);
      } else if (h > 0.0 && h < 1.0) {
        cell["path"] = "rescaled";
        const RescaledKmsModel rm = rescaled_modular(model, h);
        report = rescaled_kms_residuals(rm, f, g, config.t_grid);
        const double generator_inf = inf_spectrum(rm.generator);
        cell["route_discrepancy"] = rm.route_discrepancy;
        cell["delta"] = rm.delta;
        cell["delta_exact"] = rm.delta == generator_inf;
        ok = ok && rm.route_discrepancy <= 1e-12 && rm.delta == generator_inf;
      } else {
        cell["path"] = "restricted";
        if (!(h > 1.0 && h < h_star)) {
          throw Error(ErrorKind::ScaleOutOfRange,
                      "h = " + fmt(h) + " outside (0, 1] and (1, h_*) with h_* = " + fmt(h_star));
        }
        const RestrictedModel rm = restricted_model(model, h);
        const Matrix& e_h = rm.projection.projector;
        report = restricted_kms_residuals(rm, e_h * f, e_h * g, config.t_grid,
                                          RestrictedDynamics::RescaledRestricted);
        const KmsWitnessReport plain = restricted_kms_residuals(
            rm, e_h * f, e_h * g, config.t_grid, RestrictedDynamics::Restricted);
        report.r0.insert(report.r0.end(), plain.r0.begin(), plain.r0.end());
        report.r_beta.insert(report.r_beta.end(), plain.r_beta.begin(), plain.r_beta.end());
        cell["route_discrepancy"] = rm.kms->route_discrepancy;
        cell["lambda_star"] = rm.kms->lambda_star;
        cell["subspace_rank"] = rm.projection.indices.size();
        ok = ok && rm.kms->route_discrepancy <= 1e-12;
      }
      cell["max_r0"] = report.max_r0();
      cell["max_r_beta"] = report.max_r_beta();
      cell["strip_sup"] = report.strip_sup;
      worst = std::max(worst, report.max_residual());
      ok = ok && report.max_residual() <= tol;
      finish_cell(record, std::move(cell), ok, h_label(h));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ScaleOutOfRange && e.kind() != ErrorKind::OutOfRange) throw;
      // Out-of-range scales are reported per cell and carry no contract.
      cell["status"] = to_string(e.kind());
      record.cells.push_back(std::move(cell));
      record.cells.back()["contract"] = nullptr;
    }
  }
  record.summary["beta"] = model.beta;
  record.summary["epsilon"] = model.epsilon;
  record.summary["h_star"] = h_star;
  record.summary["modular_exponential_residual"] = exp_residual;
  record.summary["max_residual"] = worst;
  record.summary["tolerance"] = tol;
  if (!(exp_residual <= tol)) record.failures.push_back("Delta = exp(h) residual");
  return record;
}

ReportRecord run_gns_check(const ExperimentConfig& config) {
  require_matrix(config, "gns-check");
  if (!config.has_vectors()) invalid("vectors", "empty vector set");
  const double tol = tolerance_of(config, 1e-5);
  std::optional<GnsModel> model;
  try {
    model.emplace(config.covariance, config.cutoff);
  } catch (const Error& e) {
    invalid("operator", e.what());
  }
  const auto vectors = config.all_vectors();

  ReportRecord record = start("gns-check", config);
  double worst = 0.0;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const Vector& f = vectors[k];
    const Vector& g = vectors[(k + 1) % vectors.size()];
    const Complex gns = gns_expectation(*model, WeylWord::generator(f));
    const double closed = std::exp(-quadratic_form(config.covariance, f, f).real() / 4.0);
    const double error = std::abs(gns - closed);
    const double weyl = weyl_relation_residual(*model, f, g);
    const double commutant = commutant_residual(*model, f, g);
    const double n_gns = gns_number_expectation(*model, f);
    const double n_closed = one_particle_number_expectation(config.covariance, f);

    Json cell;
    cell["index"] = k;
    cell["norm"] = f.norm();
    cell["gns_value"] = to_json(gns);
    cell["closed_form"] = closed;
    cell["abs_error"] = error;
    cell["weyl_residual"] = weyl;
    cell["commutant_residual"] = commutant;
    cell["number_gns"] = n_gns;
    cell["number_closed_form"] = n_closed;
    cell["unitarity_defect"] = gns_weyl_operator(*model, f).unitarity_defect();
    const double cell_worst = std::max({error, weyl, commutant, std::abs(n_gns - n_closed)});
    worst = std::max(worst, cell_worst);
    finish_cell(record, std::move(cell), cell_worst <= tol, "vector " + std::to_string(k));
  }
  record.summary["cutoff"] = config.cutoff;
  record.summary["trusted_occupation"] = model->trusted_occupation();
  record.summary["max_residual"] = worst;
  record.summary["tolerance"] = tol;
  return record;
}

ReportRecord run_rescale_fock(const ExperimentConfig& config) {
  require_h(config);
  if (config.dimension == 0) invalid("dimension", "rescale-fock needs a dimension");
  const double tol = tolerance_of(config, 1e-12);
  const std::size_t dim = config.dimension;
  const auto vectors = config.all_vectors();
  const Vector u = vectors.empty() ? unit_vector(dim, 0) : Vector(vectors[0] / vectors[0].norm());
  double fock_axis = 1.0;
  for (std::size_t k = 0; k < 2 * dim; ++k) fock_axis *= config.cutoff + 1;
  const bool oracle = fock_axis <= static_cast<double>(kMaxFockDimension);

  ReportRecord record = start("rescale-fock", config);
  for (double h : config.h_values) {
    if (!(h > 0.0 && h <= 1.0)) invalid("h", "rescaled Fock needs h in (0, 1], got " + fmt(h));
    const OperatorSpec cov = rescaled_fock_covariance(h, dim);
    const double expected = (1.0 - h) / (2.0 * h);
    const double n_value = one_particle_number_expectation(cov, u);
    std::optional<double> n_gns;
    if (oracle) n_gns = gns_number_expectation(GnsModel(cov, config.cutoff), u);
    const bool qe = is_quasi_equivalent_to_fock(rescaled_fock_spectral(h));
    const double c = c_parameter(h);
    const StateFunctional omega_c = universally_invariant_functional(MixtureMeasure({{c, 1.0}}));
    const StateFunctional omega_h = rescaled_fock_functional(h);
    double mixture_diff = 0.0;
    for (const auto& f : vectors) mixture_diff = std::max(mixture_diff, std::abs(omega_c(f) - omega_h(f)));

    Json cell;
    cell["h"] = h;
    cell["c"] = c;
    cell["number_expectation"] = n_value;
    cell["number_expected"] = expected;
    cell["number_error"] = std::abs(n_value - expected);
    cell["number_gns"] = nullable(n_gns);
    cell["quasi_equivalent"] = qe;
    cell["mixture_difference"] = mixture_diff;
    const bool ok = std::abs(n_value - expected) <= tol && qe == (h == 1.0) &&
                    mixture_diff <= 1e-14 && (!n_gns || std::abs(*n_gns - expected) <= 1e-5);
    finish_cell(record, std::move(cell), ok, h_label(h));
  }
  const bool qe_identity = is_quasi_equivalent_to_fock(OperatorSpec::identity_atoms());
  const bool qe_finite_rank = is_quasi_equivalent_to_fock(OperatorSpec::from_atoms(
      {{1.0, Multiplicity::infinite()}, {2.0, Multiplicity::finite(3)}}));
  record.summary["unit_vector"] = to_json(u);
  record.summary["quasi_equivalent_identity"] = qe_identity;
  record.summary["quasi_equivalent_finite_rank_excess"] = qe_finite_rank;
  record.summary["gns_oracle"] = oracle;
  if (!qe_identity || !qe_finite_rank) record.failures.push_back("quasi-equivalence reference flags");
  return record;
}

namespace {

// Pairs (u, v) where v contains the adjoint of one generator of u, so the
// products have a nonzero identity component for the trace to see.
std::vector<std::pair<WeylWord, WeylWord>> trace_pairs(Rng& rng, std::size_t dim,
                                                       std::size_t count) {
  std::vector<std::pair<WeylWord, WeylWord>> pairs;
  for (std::size_t k = 0; k < count; ++k) {
    WeylWord u = random_word(rng, dim, 3);
    WeylWord v = random_word(rng, dim, 2);
    const auto terms = u.terms();
    v += weyl_adjoint(WeylWord::generator(terms.front().vector, terms.front().coefficient));
    pairs.emplace_back(std::move(u), std::move(v));
  }
  return pairs;
}

// 0 and s b, i s b, s (1 + i) b / sqrt2 for every basis column b, s in {1/2, 1, 2}.
std::vector<Vector> subspace_probes(const Matrix& basis) {
  std::vector<Vector> probes{Vector::Zero(basis.rows())};
  const Complex i(0.0, 1.0);
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    const Vector b = basis.col(k);
    for (double s : {0.5, 1.0, 2.0}) {
      probes.push_back(s * b);
      probes.push_back(i * s * b);
      probes.push_back(((1.0 + i) * s / std::sqrt(2.0)) * b);
    }
  }
  return probes;
}

}  // namespace

ReportRecord run_restrict_scan(const ExperimentConfig& config) {
  require_matrix(config, "restrict-scan");
  require_h(config);
  const double tol = tolerance_of(config, 1e-10);
  const OperatorSpec& a = config.covariance;
  const std::size_t dim = a.dimension();
  const double h_star = op_norm(a);
  const auto vectors = config.all_vectors();
  const Vector e_low = a.eigenvectors().col(0);

  ReportRecord record = start("restrict-scan", config);
  std::optional<ProjectionSpec> previous;
  for (double h : config.h_values) {
    Json cell;
    cell["h"] = h;
    cell["status"] = "ok";
    cell["subspace_rank"] = nullptr;
    cell["rescaled_bottom"] = nullptr;
    cell["nested"] = nullptr;
    cell["restricted_gram_min"] = nullptr;
    cell["rescaled_gram_min"] = nullptr;
    cell["nonregular_dichotomy"] = nullptr;
    cell["lambda_star"] = nullptr;
    cell["modular_norm"] = nullptr;
    cell["correspondence_equal"] = nullptr;
    try {
      const RestrictedModel rm = config.kms ? restricted_model(*config.kms, h) : restricted_model(a, h);
      bool ok = rm.rescaled_bottom >= 1.0;
      cell["subspace_rank"] = rm.projection.indices.size();
      cell["rescaled_bottom"] = rm.rescaled_bottom;
      if (previous) {
        const bool nested = is_subprojection(rm.projection, *previous);
        cell["nested"] = nested;
        ok = ok && nested;
      }

      // Gram positivity inside H_h: omega^(h) at scale h, omega~_h at scale 1.
      std::vector<Vector> inside = subspace_probes(rm.projection.basis);
      for (const auto& v : vectors) inside.push_back(rm.projection.projector * v);
      const GramReport plain = check_sigma_h_positivity(restricted_state(rm), inside, h, tol);
      const GramReport tilde = check_sigma_h_positivity(nonregular_state(a, h), inside, 1.0, tol);
      cell["restricted_gram_min"] = plain.min_eigenvalue;
      cell["rescaled_gram_min"] = tilde.min_eigenvalue;
      ok = ok && plain.positive && tilde.positive;

      // t -> omega~_h(W_{t f}) for f orthogonal to H_h jumps from 1 to 0.
      if (rm.projection.membership_residual(e_low) > 0.5) {
        const StateFunctional tilde_state = nonregular_state(a, h);
        bool dichotomy = tilde_state(Vector::Zero(static_cast<Eigen::Index>(dim))) == Complex(1.0);
        for (double t : {1e-6, 1e-3, 0.5, 1.0, 2.0}) {
          dichotomy = dichotomy && tilde_state(t * e_low) == Complex(0.0);
        }
        cell["nonregular_dichotomy"] = dichotomy;
        ok = ok && dichotomy;
      }

      if (rm.kms) {
        const double modular_norm = op_norm(rm.kms->modular);
        const CorrespondenceReport corr =
            spectral_correspondence_check(a, config.kms->hamiltonian, config.kms->beta, h);
        cell["lambda_star"] = rm.kms->lambda_star;
        cell["modular_norm"] = modular_norm;
        cell["correspondence_equal"] = corr.equal;
        ok = ok && modular_norm < rm.kms->lambda_star && corr.equal &&
             rm.kms->lambda_star == ScalarMap::modular(config.kms->beta)(h);
      }
      previous = rm.projection;
      finish_cell(record, std::move(cell), ok, h_label(h));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ScaleOutOfRange) throw;
      cell["status"] = to_string(e.kind());
      record.cells.push_back(std::move(cell));
      record.cells.back()["contract"] = nullptr;
    }
  }

  // Trace state and the h -> infinity sequence.
  Rng rng(config.word_seed.value_or(config.random ? config.random->seed : 0));
  const auto pairs = trace_pairs(rng, dim, config.word_pairs);
  const double trace_deviation = check_trace_property(trace_state(), pairs);
  std::vector<double> limit_grid;
  for (double h : config.h_values) {
    if (h > 1.0 && h < h_star && (limit_grid.empty() || h > limit_grid.back())) limit_grid.push_back(h);
  }
  limit_grid.push_back(h_star);
  limit_grid.push_back(2.0 * h_star);
  Json limits = Json::array();
  const std::vector<Vector> probes = vectors.empty() ? std::vector<Vector>{e_low} : vectors;
  for (const auto& f : probes) {
    const LimitSequence seq = limit_to_trace_state(a, f, limit_grid);
    Json entry;
    entry["vector"] = to_json(f);
    entry["h_grid"] = seq.h_grid;
    entry["values"] = Json::array();
    for (const auto& v : seq.values) entry["values"].push_back(to_json(v));
    entry["top_eigenspace_mass"] = seq.top_eigenspace_mass;
    entry["eventually_zero"] = seq.eventually_zero;
    limits.push_back(std::move(entry));
  }
  record.summary["h_star"] = h_star;
  record.summary["trace_word_pairs"] = pairs.size();
  record.summary["trace_deviation"] = trace_deviation;
  record.summary["limit_sequences"] = std::move(limits);
  if (trace_deviation != 0.0) record.failures.push_back("trace property");
  return record;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"positivity-scan", "kms-verify", "gns-check",
                                              "rescale-fock", "restrict-scan"};
  return names;
}

ReportRecord run_experiment(const std::string& name, const ExperimentConfig& config) {
  if (name == "positivity-scan") return run_positivity_scan(config);
  if (name == "kms-verify") return run_kms_verify(config);
  if (name == "gns-check") return run_gns_check(config);
  if (name == "rescale-fock") return run_rescale_fock(config);
  if (name == "restrict-scan") return run_restrict_scan(config);
  invalid("experiment", "unknown experiment '" + name + "'");
}

}  // namespace weylscale
