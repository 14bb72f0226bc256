// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/channel_model.hpp"
#include "isac/param_estimation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isac::sim {

enum class ScenarioKind { CapacitySweep, SensingSweep, IsacTradeoff, MmWaveEstimation, BeamScan };
enum class OutputFormat { Csv, Json };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& name);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::CapacitySweep;

    int tx_antennas = 4;      // M
    int comm_rx = 4;          // N_c
    int sensing_rx = 4;       // N_s
    int users = 2;            // K
    int block_length = 8;     // T
    int subcarriers = 16;     // N_sc
    int grid_size = 4;        // D
    int paths = 1;            // L
    int beams = 2;            // sensing beams in beam_scan
    int shift_bins = 1;       // beam_scan shift step in grid bins
    int intervals = 4;        // beam_scan intervals J

    double power = 1.0;       // P_t
    double noise_variance = 1.0;
    std::vector<double> powers{1.0, 2.0, 4.0};
    std::vector<double> rho{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};

    double subcarrier_spacing_hz = 120e3;
    double symbol_duration_s = 1e-6;
    double carrier_hz = 28e9;
    StageOrder order = StageOrder::DopplerFirst;

    double observation_noise = 0.0;  // noise variance for the observe command

    // Explicit propagation paths for the observe command; empty means random on-grid paths.
    std::vector<PathParameters> channel_paths;

    int trials = 10;
    std::uint64_t seed = 1;
    std::string output;
    OutputFormat format = OutputFormat::Csv;

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

/// Parses a JSON config document. Angles in "channel_paths" are in degrees.
/// Unknown keys are rejected.
ScenarioConfig config_from_json_text(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

}  // namespace isac::sim
