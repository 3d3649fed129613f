#include "doctest.h"
#include "weylscale/error.hpp"
#include "weylscale/experiments.hpp"

using namespace weylscale;

namespace {

ReportRecord run(const std::string& name, const std::string& text) {
  return run_experiment(name, parse_config_text(text));
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("positivity scan on diag(1.5, 2)") {
  const ReportRecord r = run("positivity-scan", R"({
    "operator": {"diagonal": [1.5, 2]},
    "vectors": {"random": {"seed": 1, "count": 6, "sets": 5}},
    "h": {"start": 0.5, "stop": 2.5, "count": 9}
  })");
  CHECK(r.passed());
  CHECK(r.summary["empirical_threshold"].get<double>() == 1.5);
  CHECK(r.summary["first_failing_h"].get<double>() == 1.75);
  for (const auto& cell : r.cells) {
    CHECK(cell["two_point_satisfied"].get<bool>() == (cell["h"].get<double>() <= 1.5));
  }
}

TEST_CASE("positivity scan with A = I inside (0, 1]") {
  const ReportRecord r = run("positivity-scan", R"({
    "operator": {"diagonal": [1, 1]},
    "vectors": {"random": {"seed": 2, "count": 5}},
    "h": [0.2, 0.6, 1]
  })");
  CHECK(r.passed());
  CHECK(r.summary["first_failing_h"].is_null());
}

TEST_CASE("empty vector set is a config error") {
  CHECK_THROWS_AS(run("positivity-scan", R"({"operator": {"diagonal": [2]}, "h": [1]})"), Error);
  CHECK_THROWS_AS(run("no-such-suite", R"({"operator": {"diagonal": [2]}})"), Error);
}

TEST_CASE("kms-verify over the three regimes") {
  const ReportRecord r = run("kms-verify", R"({
    "operator": {"kms": {"hamiltonian": {"diagonal": ["ln2"]}, "beta": 1}},
    "vectors": {"explicit": [[0.5], [[0, 0.3]]]},
    "h": [0.25, 0.5, 0.75, 1, 2, 4]
  })");
  CHECK(r.passed());
  CHECK(r.cells[3]["path"] == "unrescaled");
  CHECK(r.cells[4]["path"] == "restricted");
  CHECK(r.cells[4]["max_r0"].get<double>() <= 1e-10);
  CHECK(r.cells[5]["status"] == "ScaleOutOfRange");
}

TEST_CASE("gns-check, rescale-fock and restrict-scan examples") {
  const ReportRecord gns = run("gns-check", R"({
    "operator": {"diagonal": [2]},
    "vectors": {"explicit": [[0.5], [[0.2, -0.6]]]},
    "cutoff": 40
  })");
  CHECK(gns.passed());
  CHECK(gns.cells[0]["abs_error"].get<double>() <= 1e-5);

  const ReportRecord fock = run("rescale-fock", R"({
    "dimension": 1, "operator": {"diagonal": [1]}, "h": [0.5],
    "vectors": {"random": {"seed": 4, "count": 5}}
  })");
  CHECK(fock.passed());
  CHECK(fock.cells[0]["number_expectation"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(fock.cells[0]["quasi_equivalent"].get<bool>());

  const ReportRecord scan = run("restrict-scan", R"({
    "operator": {"diagonal": [1, 3]}, "h": {"start": 1.25, "stop": 2.75, "count": 4},
    "word_seed": 3
  })");
  CHECK(scan.passed());
  for (const auto& cell : scan.cells) CHECK(cell["subspace_rank"].get<int>() == 1);
  CHECK(scan.cells[1]["nested"].get<bool>());
  CHECK(scan.summary["trace_deviation"].get<double>() == 0.0);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string text = R"({
    "operator": {"diagonal": [1.5, 2, 4]},
    "vectors": {"random": {"seed": 77, "count": 6, "sets": 3}},
    "h": [1, 2]
  })";
  CHECK(serialize_object(run("positivity-scan", text)) ==
        serialize_object(run("positivity-scan", text)));
  CHECK(serialize_table(run("positivity-scan", text)) ==
        serialize_table(run("positivity-scan", text)));
}

}
