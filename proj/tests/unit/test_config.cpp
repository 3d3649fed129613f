#include <cmath>
#include <numbers>

#include "doctest.h"
#include "weylscale/config.hpp"
#include "weylscale/error.hpp"

using namespace weylscale;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigInvalid);
    return e.what();
  }
  FAIL("expected ConfigInvalid");
  return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("exact expressions") {
  CHECK(evaluate_expression("ln2") == std::numbers::ln2);
  CHECK(evaluate_expression("1/3") == 1.0 / 3.0);
  CHECK(evaluate_expression("e") == std::numbers::e);
  CHECK(evaluate_expression("2*ln(3)") == 2.0 * std::log(3.0));
  CHECK(evaluate_expression("-sqrt(2)/2") == -std::sqrt(2.0) / 2.0);
  CHECK(evaluate_expression("2^3 - (1 + 1)") == 6.0);
  CHECK(evaluate_expression(" 3/2 ") == 1.5);
  CHECK(evaluate_expression("1e-3") == 1e-3);
  CHECK_THROWS_AS(evaluate_expression("ln"), Error);
  CHECK_THROWS_AS(evaluate_expression("foo"), Error);
  CHECK_THROWS_AS(evaluate_expression("1 +"), Error);
  CHECK_THROWS_AS(evaluate_expression("(2"), Error);
}

TEST_CASE("operator sources") {
  const ExperimentConfig diag = parse_config_text(R"({"operator": {"diagonal": ["3/2", 2]}})");
  CHECK(diag.dimension == 2);
  CHECK(diag.covariance.eigenvalues()[0] == 1.5);

  const ExperimentConfig mat =
      parse_config_text(R"({"operator": {"matrix": [[2, [1, -1]], [[1, 1], 3]]}})");
  CHECK(mat.covariance.eigenvalues()[0] == doctest::Approx(1.0));

  const ExperimentConfig atoms = parse_config_text(
      R"({"operator": {"atoms": [{"value": 1, "multiplicity": "inf"}, {"value": "5/2", "multiplicity": 2}]}})");
  CHECK_FALSE(atoms.covariance.is_matrix());
  CHECK(atoms.covariance.atoms()[1].value == 2.5);

  const ExperimentConfig kms = parse_config_text(
      R"({"operator": {"kms": {"hamiltonian": {"diagonal": ["ln2"]}, "beta": 1}}})");
  REQUIRE(kms.kms);
  CHECK(kms.covariance.eigenvalues()[0] == doctest::Approx(3.0));
}

TEST_CASE("field-level errors") {
  CHECK(config_error(R"({})").find("operator") != std::string::npos);
  CHECK(config_error(R"({"operator": {"diagonal": [1]}, "vectors": {"random": {"count": 3}}})")
            .find("seed") != std::string::npos);
  CHECK(config_error(R"({"operator": {"diagonal": [1]}, "vectors": {"explicit": []}})")
            .find("empty") != std::string::npos);
  CHECK(config_error(R"({"operator": {"diagonal": [1, 2]}, "dimension": 3})")
            .find("dimension") != std::string::npos);
  CHECK(config_error(R"({"operator": {"diagonal": [1]}, "vectors": {"explicit": [[1, 2]]}})")
            .find("vectors.explicit[0]") != std::string::npos);
  CHECK(config_error(R"({"operator": {"matrix": [[1, 2], [0, 1]]}})").find("NonHermitian") !=
        std::string::npos);
  CHECK(config_error(R"({"operator": {"diagonal": [1]}, "format": "csv"})").find("format") !=
        std::string::npos);
  CHECK(config_error(R"({"operator": {"diagonal": [1]}, "h": ["2/"]})").find("h[0]") !=
        std::string::npos);
  CHECK(config_error("{not json").find("JSON") != std::string::npos);
}

TEST_CASE("grids, vectors and echo") {
  const ExperimentConfig c = parse_config_text(R"({
    "operator": {"diagonal": [1.5, 2]},
    "vectors": {"random": {"seed": 9, "count": 4, "sets": 3}},
    "h": {"start": "1/2", "stop": 2, "count": 4},
    "tolerance": "1/1000"
  })");
  CHECK(c.h_values == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(c.t_grid.size() == 21);
  CHECK(c.vector_sets().size() == 3);
  CHECK(c.vector_sets()[2].size() == 4);
  // Seeded draws are reproducible.
  CHECK((c.all_vectors()[5] - c.all_vectors()[5]).norm() == 0.0);
  CHECK(c.echo["h"]["start"].get<double>() == 0.5);
  CHECK(c.echo["tolerance"].get<double>() == 0.001);

  ExperimentConfig d = c;
  override_seed(d, 10);
  CHECK((d.all_vectors()[0] - c.all_vectors()[0]).norm() > 0.0);
  CHECK(d.echo["vectors"]["random"]["seed"].get<int>() == 10);
}

}
