// Batch runner: weylscale <suite> --config PATH [--out PATH] [--format object|table]
//                                 [--seed N] [--tol X]
// Exit codes: 0 all cells pass, 2 configuration error, 3 contract violation.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "weylscale/config.hpp"
#include "weylscale/error.hpp"
#include "weylscale/experiments.hpp"
#include "weylscale/report.hpp"

int main(int argc, char** argv) {
  using namespace weylscale;

  CLI::App app{"Weyl algebra scaling experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;

  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " suite");
    sub->add_option("--config", config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--out", out_path, "report path (default: standard output)");
    sub->add_option("--format", format, "object or table")->check(CLI::IsMember({"object", "table"}));
    sub->add_option("--seed", seed, "override the random seed");
    sub->add_option("--tol", tol, "override the contract tolerance");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string suite = app.get_subcommands().front()->get_name();

  ReportRecord record;
  std::string text;
  try {
    ExperimentConfig config = load_config(config_path);
    if (seed) override_seed(config, *seed);
    if (tol) override_tolerance(config, *tol);
    if (!format.empty()) config.format = format;
    const auto begin = std::chrono::steady_clock::now();
    record = run_experiment(suite, config);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin);
    // Timing stays out of the report so repeated runs are byte-identical.
    std::cerr << suite << ": " << record.cells.size() << " cells in " << elapsed.count() << " s\n";
    text = config.format == "table" ? serialize_table(record) : serialize_object(record);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return 2;
    }
    out << text;
  }
  if (!record.passed()) {
    std::cerr << "contract violations:\n";
    for (const auto& f : record.failures) std::cerr << "  " << f << '\n';
    return 3;
  }
  return 0;
}
