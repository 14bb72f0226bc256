// SPDX-License-Identifier: Apache-2.0

#include "isac/sim/scenario.hpp"

#include "isac/comm_capacity.hpp"
#include "isac/isac_waveform.hpp"
#include "isac/kernels.hpp"
#include "isac/mmwave_precoding.hpp"
#include "isac/rng.hpp"
#include "isac/sensing_capacity.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace isac::sim {

namespace {

using Metrics = std::vector<std::pair<std::string, double>>;
// Per trial: one metric list per parameter point.
using TrialMetrics = std::vector<Metrics>;

constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

CounterRng instance_rng(const ScenarioConfig& cfg, int trial) {
    return CounterRng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)), kInstanceStream);
}

CMatrix qpsk_symbols(int rows, int cols, CounterRng& rng) {
    CMatrix c(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) c(i, j) = std::polar(1.0, kPi * (2 * rng.uniform_int(4) + 1) / 4.0);
    return c;
}

ChannelCovariance random_covariance(int m, CounterRng& rng) {
    const CMatrix b = rng.complex_gaussian_matrix(m, m);
    return ChannelCovariance(b * b.adjoint() / static_cast<double>(m));
}

TrialMetrics capacity_trial(const ScenarioConfig& cfg, int trial) {
    const ChannelMatrix hc = random_channel(cfg.comm_rx, cfg.tx_antennas, derive_seed(cfg.seed, trial));
    const NoiseSpec noise(cfg.noise_variance);
    TrialMetrics out;
    for (double p : cfg.powers) {
        const CapacityResult r = comm_capacity(hc, p, noise);
        double active = 0.0;
        for (double level : r.allocation.levels) active += level > 0.0 ? 1.0 : 0.0;
        out.push_back({{"comm_bits", r.bits_per_symbol}, {"active_modes", active}});
    }
    return out;
}

TrialMetrics sensing_trial(const ScenarioConfig& cfg, int trial) {
    CounterRng rng = instance_rng(cfg, trial);
    const ChannelCovariance qh = random_covariance(cfg.tx_antennas, rng);
    const NoiseSpec noise(cfg.noise_variance);
    TrialMetrics out;
    for (double p : cfg.powers) {
        const EstimationRateResult r = sensing_capacity(qh, cfg.sensing_rx, cfg.block_length, p, noise);
        double active = 0.0;
        for (double level : r.allocation.levels) active += level > 0.0 ? 1.0 : 0.0;
        out.push_back({{"sensing_bits", r.bits_per_transmission}, {"active_modes", active}});
    }
    return out;
}

TrialMetrics tradeoff_trial(const ScenarioConfig& cfg, int trial) {
    CounterRng rng = instance_rng(cfg, trial);
    const int m = cfg.tx_antennas;
    const int t = cfg.block_length;
    const ChannelMatrix hc = rng.complex_gaussian_matrix(cfg.users, m);
    const ChannelCovariance qh = random_covariance(m, rng);
    const SymbolBlock c = qpsk_symbols(cfg.users, t, rng);
    const NoiseSpec noise(cfg.noise_variance);

    // Sensing reference: the optimal probing block, transmitted column by column.
    const CMatrix xs = optimal_sensing_waveform(qh, t, cfg.power, noise).block.transpose();
    const double energy = t * cfg.power;
    const WeightedMiProblem problem = make_weighted_mi_problem(hc, qh, noise, t, cfg.sensing_rx, cfg.power);

    TrialMetrics out;
    for (double rho : cfg.rho) {
        const WaveformBlock x = solve_pareto_tradeoff(hc, c, xs, TradeoffWeight(rho), energy);
        const WeightedMiSolution mi = optimize_weighted_mi(problem, TradeoffWeight(rho));
        out.push_back({{"interference_power", interference_power(x, hc, c)},
                       {"waveform_distance", (x - xs).squaredNorm()},
                       {"comm_bits", comm_information(mi.q, problem)},
                       {"sensing_bits", sensing_information(mi.q, problem)},
                       {"weighted_objective", mi.objective}});
    }
    return out;
}

CMatrix identity_probing(int m) { return CMatrix::Identity(m, m); }

double gain_error_sq(const PathEstimate* est, cdouble truth) {
    const cdouble e = est ? est->gain : cdouble{0.0, 0.0};
    return std::norm(e - truth);
}

TrialMetrics estimation_trial(const ScenarioConfig& cfg, int trial) {
    CounterRng rng = instance_rng(cfg, trial);
    const ArrayGeometry tx(cfg.tx_antennas), rx(cfg.sensing_rx);
    const SteeringDictionary dict_tx = build_dictionary(tx, cfg.grid_size);
    const SteeringDictionary dict_rx = build_dictionary(rx, cfg.grid_size);
    const std::vector<OnGridPath> truth =
        draw_on_grid_paths(cfg.paths, cfg.grid_size, cfg.grid_size, cfg.block_length, cfg.subcarriers, rng);

    MmWaveChannelSpec spec;
    spec.tx = tx;
    spec.rx = rx;
    spec.carrier_hz = cfg.carrier_hz;
    spec.symbol_duration_s = cfg.symbol_duration_s;
    for (const auto& g : truth) {
        spec.paths.push_back(on_grid_path(g, dict_tx, dict_rx, cfg.subcarriers, cfg.subcarrier_spacing_hz,
                                          cfg.block_length, cfg.symbol_duration_s));
    }
    const CMatrix probing = identity_probing(cfg.tx_antennas);
    const ObservationTensor clean =
        simulate_observations(spec, probing, cfg.subcarriers, cfg.subcarrier_spacing_hz, cfg.block_length, 0.0, rng);
    const double entries = static_cast<double>(clean.frames.size()) * clean.rx * clean.probes;
    const double signal_power = clean.energy() / entries;

    // One unit-variance noise draw per trial, scaled per SNR point.
    CounterRng noise_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)), kNoiseStream);
    std::vector<CMatrix> unit_noise;
    unit_noise.reserve(clean.frames.size());
    for (std::size_t f = 0; f < clean.frames.size(); ++f) {
        unit_noise.push_back(noise_rng.complex_gaussian_matrix(clean.rx, clean.probes));
    }

    TrialMetrics out;
    for (double snr_db : cfg.snr_db) {
        const double sigma = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));
        ObservationTensor noisy = clean;
        for (std::size_t f = 0; f < noisy.frames.size(); ++f) noisy.frames[f] += sigma * unit_noise[f];

        double bin_error = 0.0, gain_sq = 0.0;
        try {
            const EstimationReport report = estimate_paths(noisy, dict_tx, dict_rx, probing, cfg.paths, cfg.order);
            for (const auto& g : truth) {
                const PathEstimate* match = nullptr;
                for (const auto& p : report.paths) {
                    if (p.aod_index == g.aod_index && p.aoa_index == g.aoa_index) match = &p;
                }
                if (!match || match->doppler_bin != g.doppler_bin || match->delay_bin != g.delay_bin) bin_error = 1.0;
                gain_sq += gain_error_sq(match, g.gain);
            }
        } catch (const std::domain_error&) {
            // Noise can make the greedy search pick colliding atoms; count as a miss.
            bin_error = 1.0;
            gain_sq = 0.0;
            for (const auto& g : truth) gain_sq += std::norm(g.gain);
        }
        out.push_back({{"bin_error", bin_error}, {"gain_rmse", std::sqrt(gain_sq / truth.size())}});
    }
    return out;
}

int argmax_lowest(const RVector& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (v(i) > v(best)) best = i;
    return static_cast<int>(best);
}

double wrap_normalized(double v) { return v - std::floor(v + 0.5); }

TrialMetrics beam_scan_trial(const ScenarioConfig& cfg, int trial) {
    CounterRng rng = instance_rng(cfg, trial);
    const int d = cfg.grid_size;
    const ArrayGeometry geom(cfg.tx_antennas);
    const SteeringDictionary dict = build_dictionary(geom, d);

    // Distinct random target directions, one unit response per beam.
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < cfg.beams) {
        const int idx = rng.uniform_int(d);
        bool seen = false;
        for (int t : targets) seen |= t == idx;
        if (!seen) targets.push_back(idx);
    }
    DesiredResponse g = CMatrix::Zero(d, cfg.beams);
    for (int b = 0; b < cfg.beams; ++b) g(targets[static_cast<std::size_t>(b)], b) = 1.0;
    const Precoder base = Precoder::normalized(zf_scanning_precoder(dict, g).matrix, PrecoderNormalization::UnitColumns);

    std::vector<int> base_peaks;
    for (int b = 0; b < cfg.beams; ++b) base_peaks.push_back(argmax_lowest(beampattern(base.matrix.col(b), dict)));

    TrialMetrics out;
    for (int j = 0; j < cfg.intervals; ++j) {
        // The mapping is periodic in the normalized shift, so wrap it into the visible range.
        const double shift = wrap_normalized(static_cast<double>(j) * cfg.shift_bins / d);
        const Precoder shifted = shift_schedule(base, geom, shift, 1);
        double peak_error = 0.0, norm_error = 0.0, mainlobe = 0.0;
        for (int b = 0; b < cfg.beams; ++b) {
            const RVector pattern = beampattern(shifted.matrix.col(b), dict);
            const int expected = (base_peaks[static_cast<std::size_t>(b)] + j * cfg.shift_bins) % d;
            const int diff = std::abs(argmax_lowest(pattern) - expected);
            peak_error = std::max(peak_error, static_cast<double>(std::min(diff, d - diff)));
            norm_error = std::max(norm_error, std::abs(shifted.matrix.col(b).norm() - base.matrix.col(b).norm()));
            mainlobe += pattern(expected) / cfg.beams;
        }
        out.push_back({{"peak_error_bins", peak_error}, {"norm_error", norm_error}, {"mainlobe_gain", mainlobe}});
    }
    return out;
}

TrialMetrics run_trial(const ScenarioConfig& cfg, int trial) {
    switch (cfg.kind) {
        case ScenarioKind::CapacitySweep: return capacity_trial(cfg, trial);
        case ScenarioKind::SensingSweep: return sensing_trial(cfg, trial);
        case ScenarioKind::IsacTradeoff: return tradeoff_trial(cfg, trial);
        case ScenarioKind::MmWaveEstimation: return estimation_trial(cfg, trial);
        case ScenarioKind::BeamScan: return beam_scan_trial(cfg, trial);
    }
    throw std::invalid_argument("unknown scenario kind");
}

}  // namespace

std::string sweep_parameter(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
        case ScenarioKind::CapacitySweep:
        case ScenarioKind::SensingSweep: return "power";
        case ScenarioKind::IsacTradeoff: return "rho";
        case ScenarioKind::MmWaveEstimation: return "snr_db";
        case ScenarioKind::BeamScan: return "interval";
    }
    throw std::invalid_argument("unknown scenario kind");
}

std::vector<double> sweep_values(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
        case ScenarioKind::CapacitySweep:
        case ScenarioKind::SensingSweep: return cfg.powers;
        case ScenarioKind::IsacTradeoff: return cfg.rho;
        case ScenarioKind::MmWaveEstimation: return cfg.snr_db;
        case ScenarioKind::BeamScan: {
            std::vector<double> v;
            for (int j = 0; j < cfg.intervals; ++j) v.push_back(j);
            return v;
        }
    }
    throw std::invalid_argument("unknown scenario kind");
}

std::vector<TrialResult> run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::string scenario = to_string(cfg.kind);
    const std::string param = sweep_parameter(cfg);
    const std::vector<double> values = sweep_values(cfg);

    std::vector<TrialMetrics> per_trial(static_cast<std::size_t>(cfg.trials));
    kernels::parallel::for_each_index(cfg.trials, [&](int trial) {
        per_trial[static_cast<std::size_t>(trial)] = run_trial(cfg, trial);
    });

    std::vector<TrialResult> rows;
    for (std::size_t p = 0; p < values.size(); ++p) {
        const Metrics& names = per_trial.front()[p];
        for (int trial = 0; trial < cfg.trials; ++trial) {
            for (const auto& [metric, value] : per_trial[static_cast<std::size_t>(trial)][p]) {
                if (!std::isfinite(value)) {
                    throw std::runtime_error(scenario + ": non-finite " + metric + " in trial " + std::to_string(trial));
                }
                rows.push_back({scenario, param, values[p], std::to_string(trial), metric, value});
            }
        }
        std::vector<double> mean(names.size(), 0.0), var(names.size(), 0.0);
        for (std::size_t k = 0; k < names.size(); ++k) {
            for (const auto& tm : per_trial) mean[k] += tm[p][k].second;
            mean[k] /= cfg.trials;
            for (const auto& tm : per_trial) var[k] += (tm[p][k].second - mean[k]) * (tm[p][k].second - mean[k]);
            var[k] = cfg.trials > 1 ? var[k] / (cfg.trials - 1) : 0.0;
        }
        for (std::size_t k = 0; k < names.size(); ++k) rows.push_back({scenario, param, values[p], "mean", names[k].first, mean[k]});
        for (std::size_t k = 0; k < names.size(); ++k) {
            rows.push_back({scenario, param, values[p], "std", names[k].first, std::sqrt(var[k])});
        }
    }
    return rows;
}

ObservationRun simulate_from_config(const ScenarioConfig& cfg) {
    ScenarioConfig checked = cfg;
    checked.kind = ScenarioKind::MmWaveEstimation;
    if (cfg.channel_paths.empty()) checked.validate();

    const ArrayGeometry tx(cfg.tx_antennas), rx(cfg.sensing_rx);
    MmWaveChannelSpec spec;
    spec.tx = tx;
    spec.rx = rx;
    spec.carrier_hz = cfg.carrier_hz;
    spec.symbol_duration_s = cfg.symbol_duration_s;
    CounterRng rng(cfg.seed, kInstanceStream);
    if (!cfg.channel_paths.empty()) {
        spec.paths = cfg.channel_paths;
    } else {
        const SteeringDictionary dict_tx = build_dictionary(tx, cfg.grid_size);
        const SteeringDictionary dict_rx = build_dictionary(rx, cfg.grid_size);
        for (const auto& g :
             draw_on_grid_paths(cfg.paths, cfg.grid_size, cfg.grid_size, cfg.block_length, cfg.subcarriers, rng)) {
            spec.paths.push_back(on_grid_path(g, dict_tx, dict_rx, cfg.subcarriers, cfg.subcarrier_spacing_hz,
                                              cfg.block_length, cfg.symbol_duration_s));
        }
    }
    CounterRng noise_rng(cfg.seed, kNoiseStream);
    ObservationRun run{simulate_observations(spec, identity_probing(cfg.tx_antennas), cfg.subcarriers,
                                             cfg.subcarrier_spacing_hz, cfg.block_length, cfg.observation_noise,
                                             noise_rng),
                       spec.paths};
    return run;
}

EstimationReport estimate_from_config(const ObservationTensor& obs, const ScenarioConfig& cfg) {
    obs.validate();
    if (obs.probes < 1) throw std::invalid_argument("observations have no probes");
    const SteeringDictionary dict_tx = build_dictionary(ArrayGeometry(obs.probes), cfg.grid_size);
    const SteeringDictionary dict_rx = build_dictionary(ArrayGeometry(obs.rx), cfg.grid_size);
    return estimate_paths(obs, dict_tx, dict_rx, identity_probing(obs.probes), cfg.paths, cfg.order);
}

std::string report_to_json(const EstimationReport& report) {
    nlohmann::ordered_json paths = nlohmann::ordered_json::array();
    constexpr double kDeg = 180.0 / kPi;
    for (const auto& p : report.paths) {
        paths.push_back({{"aod_index", p.aod_index},
                         {"aoa_index", p.aoa_index},
                         {"doppler_bin", p.doppler_bin},
                         {"delay_bin", p.delay_bin},
                         {"aod_deg", p.aod * kDeg},
                         {"aoa_deg", p.aoa * kDeg},
                         {"doppler_hz", p.doppler_hz},
                         {"delay_s", p.delay_s},
                         {"gain_re", p.gain.real()},
                         {"gain_im", p.gain.imag()}});
    }
    nlohmann::ordered_json j = {{"paths", paths},
                                {"input_energy", report.input_energy},
                                {"residual_energy", report.residual_energy},
                                {"beam_peak_ratios", report.beam_peak_ratios},
                                {"doppler_peak_ratios", report.doppler_peak_ratios},
                                {"delay_peak_ratios", report.delay_peak_ratios}};
    return j.dump(2);
}

}  // namespace isac::sim
