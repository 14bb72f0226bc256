// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/param_estimation.hpp"
#include "isac/sim/config.hpp"
#include "isac/sim/results.hpp"

#include <string>
#include <vector>

namespace isac::sim {

/// Runs every (parameter point, trial) of the scenario. Trials run in
/// parallel on independent streams derived from (seed, trial); rows come out
/// grouped by parameter point in trial order, followed by "mean" and "std"
/// rows per metric. Output does not depend on the thread count.
std::vector<TrialResult> run_scenario(const ScenarioConfig& cfg);

/// Parameter name and values swept by a scenario.
std::string sweep_parameter(const ScenarioConfig& cfg);
std::vector<double> sweep_values(const ScenarioConfig& cfg);

struct ObservationRun {
    ObservationTensor observations;
    std::vector<PathParameters> truth;
};

/// Forward model for the observe command: identity probing (probes = M),
/// explicit channel_paths if given, otherwise `paths` random on-grid paths
/// drawn from the seed.
ObservationRun simulate_from_config(const ScenarioConfig& cfg);

/// Runs parameter estimation with dictionaries of cfg.grid_size points and
/// identity probing.
EstimationReport estimate_from_config(const ObservationTensor& obs, const ScenarioConfig& cfg);

std::string report_to_json(const EstimationReport& report);

}  // namespace isac::sim
