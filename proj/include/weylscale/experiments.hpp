#pragma once

// Named experiment suites. Each runner reads an ExperimentConfig, evaluates its
// grid in order and returns a ReportRecord whose failures list every cell that
// missed its contract. Configuration problems throw ConfigInvalid.

#include <string>
#include <vector>

#include "weylscale/config.hpp"
#include "weylscale/report.hpp"

namespace weylscale {

// Gram verdicts and the two-point criterion per h; for h > h_max also the
// negative-witness scan. Default tolerance 1e-10 (Gram).
ReportRecord run_positivity_scan(const ExperimentConfig& config);

// KMS boundary residuals per h: h = 1 unrescaled, h < 1 rescaled, 1 < h < h_*
// restricted to H_h. Default tolerance 1e-10.
ReportRecord run_kms_verify(const ExperimentConfig& config);

// Truncated GNS vacuum expectations, Weyl relation and commutant residuals.
// Default tolerance 1e-5.
ReportRecord run_gns_check(const ExperimentConfig& config);

// Rescaled Fock state: number expectation, quasi-equivalence, mixture identity.
// Default tolerance 1e-12.
ReportRecord run_rescale_fock(const ExperimentConfig& config);

// Spectral subspaces H_h, restricted states, non-regularity and the trace state.
// Default tolerance 1e-10.
ReportRecord run_restrict_scan(const ExperimentConfig& config);

// Dispatch on a subcommand name; ConfigInvalid for unknown names.
ReportRecord run_experiment(const std::string& name, const ExperimentConfig& config);
const std::vector<std::string>& experiment_names();

}  // namespace weylscale
