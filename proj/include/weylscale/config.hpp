#pragma once

// Experiment configuration. The document is JSON; every number may be given
// either as a JSON number or as a string holding an exact expression such as
// "ln2", "1/3", "e", "sqrt(2)/2" or "2*ln(3)", evaluated once at parse time.
//
//   {
//     "dimension": 2,
//     "operator": {"diagonal": [1.5, 2]}            // or "matrix", "atoms", "kms"
//     "vectors": {"random": {"seed": 7, "count": 6, "sets": 20, "scale": 1}},
//     "h": {"start": 0.5, "stop": 2.5, "count": 9}, // or a list
//     "t_grid": {"start": -5, "stop": 5, "count": 21},
//     "cutoff": 40,
//     "tolerance": 1e-5,
//     "format": "object"
//   }
//
// Matrix entries are numbers or [re, im] pairs. Atoms are
// {"value": x, "multiplicity": n | "inf"}. A KMS source is
// {"kms": {"hamiltonian": <operator source>, "beta": x}}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylscale/kms.hpp"
#include "weylscale/spectral.hpp"

namespace weylscale {

using Json = nlohmann::ordered_json;

// Throws ConfigInvalid on a malformed expression.
double evaluate_expression(const std::string& text);

struct RandomVectors {
  std::uint64_t seed;
  std::size_t count;        // vectors per set
  std::size_t sets = 1;
  double scale = 1.0;       // Gaussian scale, or ball radius when in_ball
  bool in_ball = false;
};

struct ExperimentConfig {
  std::size_t dimension = 0;
  OperatorSpec covariance = OperatorSpec::identity_atoms();
  std::optional<KmsModel> kms;
  std::vector<Vector> vectors;              // explicit vectors
  std::optional<RandomVectors> random;
  std::vector<double> h_values;
  std::vector<double> t_grid;
  int cutoff = 40;
  std::optional<double> tolerance;
  std::size_t word_pairs = 100;
  std::optional<std::uint64_t> word_seed;
  std::string format = "object";
  Json echo;                                // resolved document

  // Explicit vectors, or one freshly seeded draw per set.
  std::vector<std::vector<Vector>> vector_sets() const;
  std::vector<Vector> all_vectors() const;
  bool has_vectors() const { return !vectors.empty() || random.has_value(); }
};

// Throws ConfigInvalid with the offending field path.
ExperimentConfig parse_config(const Json& document);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// --seed and --tol overrides; the echo is updated to match.
void override_seed(ExperimentConfig& config, std::uint64_t seed);
void override_tolerance(ExperimentConfig& config, double tol);

}  // namespace weylscale
