// SPDX-License-Identifier: Apache-2.0

#include "isac/sim/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isac::sim {

using nlohmann::json;

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::CapacitySweep: return "capacity_sweep";
        case ScenarioKind::SensingSweep: return "sensing_sweep";
        case ScenarioKind::IsacTradeoff: return "isac_tradeoff";
        case ScenarioKind::MmWaveEstimation: return "mmwave_estimation";
        case ScenarioKind::BeamScan: return "beam_scan";
    }
    throw std::invalid_argument("unknown scenario kind");
}

ScenarioKind parse_scenario_kind(const std::string& name) {
    for (auto k : {ScenarioKind::CapacitySweep, ScenarioKind::SensingSweep, ScenarioKind::IsacTradeoff,
                   ScenarioKind::MmWaveEstimation, ScenarioKind::BeamScan}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or json)");
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("invalid config: " + msg);
}

void require_positive(int v, const char* name) { require(v >= 1, std::string(name) + " must be >= 1"); }

void require_finite_list(const std::vector<double>& v, const char* name) {
    require(!v.empty(), std::string(name) + " must not be empty");
    for (double x : v) require(std::isfinite(x), std::string(name) + " must be finite");
}

}  // namespace

void ScenarioConfig::validate() const {
    require_positive(tx_antennas, "tx_antennas");
    require_positive(comm_rx, "comm_rx");
    require_positive(sensing_rx, "sensing_rx");
    require_positive(users, "users");
    require_positive(block_length, "block_length");
    require_positive(subcarriers, "subcarriers");
    require_positive(grid_size, "grid_size");
    require_positive(trials, "trials");
    require(paths >= 0, "paths must be >= 0");
    require(std::isfinite(power) && power > 0.0, "power must be > 0");
    require(std::isfinite(noise_variance) && noise_variance > 0.0, "noise_variance must be > 0");
    require(std::isfinite(observation_noise) && observation_noise >= 0.0, "observation_noise must be >= 0");
    require(subcarrier_spacing_hz > 0.0 && symbol_duration_s > 0.0 && carrier_hz > 0.0,
            "subcarrier_spacing_hz, symbol_duration_s and carrier_hz must be > 0");

    switch (kind) {
        case ScenarioKind::CapacitySweep:
        case ScenarioKind::SensingSweep:
            require_finite_list(powers, "powers");
            for (double p : powers) require(p > 0.0, "powers must be > 0");
            require(kind == ScenarioKind::CapacitySweep || block_length >= tx_antennas,
                    "sensing_sweep needs block_length >= tx_antennas");
            break;
        case ScenarioKind::IsacTradeoff:
            require(block_length >= tx_antennas, "isac_tradeoff needs block_length >= tx_antennas");
            require_finite_list(rho, "rho");
            for (double r : rho) require(r >= 0.0 && r <= 1.0, "rho values must lie in [0, 1]");
            break;
        case ScenarioKind::MmWaveEstimation:
            require_finite_list(snr_db, "snr_db");
            require(paths >= 1, "paths must be >= 1 for mmwave_estimation");
            require(paths <= grid_size * grid_size, "paths exceeds the number of atom pairs");
            require(block_length >= 2 && subcarriers >= 2, "block_length and subcarriers must be >= 2");
            break;
        case ScenarioKind::BeamScan:
            require_positive(beams, "beams");
            require(beams <= grid_size, "beams must not exceed grid_size");
            require(grid_size == tx_antennas, "beam_scan needs grid_size == tx_antennas (square ZF system)");
            require(shift_bins >= 0, "shift_bins must be >= 0");
            require_positive(intervals, "intervals");
            break;
    }
}

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid config: field '") + key + "': " + e.what());
    }
}

constexpr double kDeg = 3.14159265358979323846 / 180.0;

PathParameters path_from_json(const json& j) {
    static const char* allowed[] = {"gain_re", "gain_im", "delay_s", "doppler_hz", "aod_deg", "aoa_deg"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok |= key == a;
        if (!ok) throw std::invalid_argument("invalid config: unknown channel_paths key '" + key + "'");
    }
    double re = 1.0, im = 0.0, aod = 0.0, aoa = 0.0;
    PathParameters p;
    read_field(j, "gain_re", re);
    read_field(j, "gain_im", im);
    read_field(j, "delay_s", p.delay_s);
    read_field(j, "doppler_hz", p.doppler_hz);
    read_field(j, "aod_deg", aod);
    read_field(j, "aoa_deg", aoa);
    p.gain = {re, im};
    p.aod = aod * kDeg;
    p.aoa = aoa * kDeg;
    return p;
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text, ScenarioConfig cfg) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("invalid config: top level must be an object");

    static const char* known[] = {"scenario", "tx_antennas", "comm_rx", "sensing_rx", "users", "block_length",
                                  "subcarriers", "grid_size", "paths", "beams", "shift_bins", "intervals", "power",
                                  "noise_variance", "powers", "rho", "snr_db", "subcarrier_spacing_hz",
                                  "symbol_duration_s", "carrier_hz", "order", "observation_noise", "channel_paths", "trials", "seed",
                                  "output", "format"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok |= key == k;
        if (!ok) throw std::invalid_argument("invalid config: unknown key '" + key + "'");
    }

    std::string name;
    read_field(j, "scenario", name);
    if (!name.empty()) cfg.kind = parse_scenario_kind(name);
    read_field(j, "tx_antennas", cfg.tx_antennas);
    read_field(j, "comm_rx", cfg.comm_rx);
    read_field(j, "sensing_rx", cfg.sensing_rx);
    read_field(j, "users", cfg.users);
    read_field(j, "block_length", cfg.block_length);
    read_field(j, "subcarriers", cfg.subcarriers);
    read_field(j, "grid_size", cfg.grid_size);
    read_field(j, "paths", cfg.paths);
    read_field(j, "beams", cfg.beams);
    read_field(j, "shift_bins", cfg.shift_bins);
    read_field(j, "intervals", cfg.intervals);
    read_field(j, "observation_noise", cfg.observation_noise);
    read_field(j, "power", cfg.power);
    read_field(j, "noise_variance", cfg.noise_variance);
    read_field(j, "powers", cfg.powers);
    read_field(j, "rho", cfg.rho);
    read_field(j, "snr_db", cfg.snr_db);
    read_field(j, "subcarrier_spacing_hz", cfg.subcarrier_spacing_hz);
    read_field(j, "symbol_duration_s", cfg.symbol_duration_s);
    read_field(j, "carrier_hz", cfg.carrier_hz);
    std::string order;
    read_field(j, "order", order);
    if (order == "doppler_first") cfg.order = StageOrder::DopplerFirst;
    else if (order == "delay_first") cfg.order = StageOrder::DelayFirst;
    else if (!order.empty()) throw std::invalid_argument("invalid config: order must be doppler_first or delay_first");
    if (j.contains("channel_paths")) {
        const json& arr = j.at("channel_paths");
        if (!arr.is_array()) throw std::invalid_argument("invalid config: channel_paths must be an array");
        cfg.channel_paths.clear();
        for (const auto& p : arr) cfg.channel_paths.push_back(path_from_json(p));
    }
    read_field(j, "trials", cfg.trials);
    read_field(j, "seed", cfg.seed);
    read_field(j, "output", cfg.output);
    std::string format;
    read_field(j, "format", format);
    if (!format.empty()) cfg.format = parse_output_format(format);
    return cfg;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str(), std::move(base));
}

}  // namespace isac::sim
