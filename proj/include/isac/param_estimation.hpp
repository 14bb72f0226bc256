// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/channel_model.hpp"
#include "isac/rng.hpp"
#include "isac/types.hpp"

#include <vector>

namespace isac {

/// OFDM observations over one sensing block. Frame (n, t) holds the
/// rx x probes matrix Y = H_{n,t} F + Z for subcarrier n (0-based) and
/// symbol t + 1, where F is the M x probes probing matrix.
struct ObservationTensor {
    int subcarriers = 1;
    int symbols = 1;
    int rx = 1;
    int probes = 1;
    double subcarrier_spacing_hz = 120e3;
    double symbol_duration_s = 1e-6;
    double carrier_hz = 28e9;
    std::vector<CMatrix> frames;  // index n * symbols + t

    ObservationTensor() = default;
    ObservationTensor(int subcarriers, int symbols, int rx, int probes);

    CMatrix& frame(int n, int t) { return frames[static_cast<std::size_t>(n * symbols + t)]; }
    const CMatrix& frame(int n, int t) const { return frames[static_cast<std::size_t>(n * symbols + t)]; }
    double energy() const;
    void validate() const;
};

struct PathEstimate {
    int aod_index = 0;
    int aoa_index = 0;
    int doppler_bin = 0;  // f_x in 0..T-1
    int delay_bin = 0;    // tau_x in 0..N_sc-1
    cdouble gain{0.0, 0.0};
    double aod = 0.0;         // radians, from the grid
    double aoa = 0.0;
    double doppler_hz = 0.0;  // f_x / (T T_s)
    double delay_s = 0.0;     // tau_x / (N_sc f)
};

struct EstimationReport {
    std::vector<PathEstimate> paths;
    double input_energy = 0.0;
    double residual_energy = 0.0;
    std::vector<double> beam_peak_ratios;     // per greedy round
    std::vector<double> doppler_peak_ratios;  // per path
    std::vector<double> delay_peak_ratios;    // per path
};

struct BeamSearchResult {
    std::vector<std::pair<int, int>> pairs;  // (aod index, aoa index)
    std::vector<CMatrix> series;             // per path, N_sc x T coefficients h_l
    double residual_energy = 0.0;
    std::vector<double> peak_ratios;
};

/// Greedy atom-pair selection with least-squares deflation over all
/// previously chosen atoms. `probing` is the M x probes matrix used in every frame.
BeamSearchResult beam_search_angles(const ObservationTensor& obs, const SteeringDictionary& dict_tx,
                                    const SteeringDictionary& dict_rx, const CMatrix& probing, int num_paths);

struct DopplerEstimate {
    int bin = 0;
    cdouble value{0.0, 0.0};  // peak / T
    double peak_ratio = 0.0;  // peak energy over second-largest bin energy (inf if single peak)
};

struct DelayEstimate {
    int bin = 0;
    cdouble value{0.0, 0.0};  // peak / N_sc
    double peak_ratio = 0.0;
};

/// Forward T-point transform (kernel e^{-j 2 pi t k / T}) of h; peak lands on f_x.
DopplerEstimate estimate_doppler(const CVector& h);
/// Inverse-direction N-point transform (kernel e^{+j 2 pi n k / N}) of c; peak lands on tau_x.
DelayEstimate estimate_delay(const CVector& c);

double delay_from_bin(int bin, int subcarriers, double subcarrier_spacing_hz);
double doppler_from_bin(int bin, int symbols, double symbol_duration_s);
/// Doppler factor of the first symbol, exp(j 2 pi f_x / T).
cdouble doppler_constant(int bin, int symbols);

/// alpha = (c / c_D) exp(j 2 pi f tau); |alpha| = |c| / |c_D|.
cdouble estimate_gain_phase(cdouble c, cdouble doppler_correction, double tau, double carrier_hz);

enum class StageOrder { DopplerFirst, DelayFirst };

EstimationReport estimate_paths(const ObservationTensor& obs, const SteeringDictionary& dict_tx,
                                const SteeringDictionary& dict_rx, const CMatrix& probing, int num_paths,
                                StageOrder order);

/// Forward model: frames Y = H_{n,t} F + Z with Z ~ CN(0, noise_variance).
ObservationTensor simulate_observations(const MmWaveChannelSpec& spec, const CMatrix& probing, int subcarriers,
                                        double subcarrier_spacing_hz, int symbols, double noise_variance,
                                        CounterRng& rng);

/// Ground truth for a random on-grid draw.
struct OnGridPath {
    int aod_index = 0;
    int aoa_index = 0;
    int doppler_bin = 0;
    int delay_bin = 0;
    cdouble gain{1.0, 0.0};
};

/// Converts grid indices and bins to physical path parameters.
PathParameters on_grid_path(const OnGridPath& g, const SteeringDictionary& dict_tx, const SteeringDictionary& dict_rx,
                            int subcarriers, double subcarrier_spacing_hz, int symbols, double symbol_duration_s);

/// Draws `paths` on-grid paths with distinct (aod, aoa) pairs and CN(0, 1) gains.
std::vector<OnGridPath> draw_on_grid_paths(int paths, int tx_grid, int rx_grid, int symbols, int subcarriers,
                                           CounterRng& rng);

}  // namespace isac
