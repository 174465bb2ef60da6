#pragma once
// Named experiment batteries behind the CLI: each returns a report with
// verdict rows and CSV tables; dispatch is by config.experiment.

#include "bmc/config.hpp"
#include "bmc/report.hpp"

namespace bmc::experiments {

// Dispatches to the battery named by cfg.experiment.  Throws on unknown
// experiment names or unknown params fields.  Deterministic for fixed
// (config, seed) at any worker count.
report::ExperimentReport run_experiment(const config::ExperimentConfig& cfg);

// Individual batteries (params validated against each battery's known keys).
report::ExperimentReport bessel_verify_battery(const config::ExperimentConfig& cfg);
report::ExperimentReport barrier_battery(const config::ExperimentConfig& cfg);
report::ExperimentReport chaos_run_battery(const config::ExperimentConfig& cfg);
report::ExperimentReport chaos_diagnostics_battery(const config::ExperimentConfig& cfg);
report::ExperimentReport thickpoints_battery(const config::ExperimentConfig& cfg);

}  // namespace bmc::experiments
