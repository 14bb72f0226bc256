// SPDX-License-Identifier: Apache-2.0

#include "isac/param_estimation.hpp"

#include "isac/kernels.hpp"

#include <cmath>
#include <limits>

namespace isac {

ObservationTensor::ObservationTensor(int n_sc, int n_sym, int n_rx, int n_probes)
    : subcarriers(n_sc), symbols(n_sym), rx(n_rx), probes(n_probes) {
    if (n_sc < 1 || n_sym < 1 || n_rx < 1 || n_probes < 1) {
        throw std::domain_error("ObservationTensor: all dimensions must be >= 1");
    }
    frames.assign(static_cast<std::size_t>(n_sc) * static_cast<std::size_t>(n_sym), CMatrix::Zero(n_rx, n_probes));
}

double ObservationTensor::energy() const {
    double e = 0.0;
    for (const auto& f : frames) e += f.squaredNorm();
    return e;
}

void ObservationTensor::validate() const {
    if (subcarriers < 1 || symbols < 1 || rx < 1 || probes < 1) {
        throw std::domain_error("ObservationTensor: all dimensions must be >= 1");
    }
    if (frames.size() != static_cast<std::size_t>(subcarriers) * static_cast<std::size_t>(symbols)) {
        throw std::domain_error("ObservationTensor: frame count does not match dimensions");
    }
    for (const auto& f : frames) {
        if (f.rows() != rx || f.cols() != probes) throw std::domain_error("ObservationTensor: frame shape mismatch");
    }
}

namespace {

struct Peak {
    Eigen::Index index = 0;
    double ratio = 0.0;
};

// Lowest index wins ties.
Peak find_peak(const RVector& energy) {
    Peak p;
    double best = -1.0;
    for (Eigen::Index i = 0; i < energy.size(); ++i) {
        if (energy(i) > best) {
            best = energy(i);
            p.index = i;
        }
    }
    double second = 0.0;
    for (Eigen::Index i = 0; i < energy.size(); ++i) {
        if (i != p.index) second = std::max(second, energy(i));
    }
    p.ratio = second > 0.0 ? best / second : std::numeric_limits<double>::infinity();
    return p;
}

void require_nonzero(const CVector& v, const char* who) {
    if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) throw std::domain_error(std::string(who) + ": all-zero input");
}

}  // namespace

DopplerEstimate estimate_doppler(const CVector& h) {
    if (h.size() < 2) throw std::domain_error("estimate_doppler: need T >= 2");
    require_nonzero(h, "estimate_doppler");
    const CMatrix spectrum = kernels::serial::dft_rows(h.transpose(), kernels::DftSign::Forward);
    const Peak p = find_peak(spectrum.row(0).cwiseAbs2().transpose());
    return {static_cast<int>(p.index), spectrum(0, p.index) / static_cast<double>(h.size()), p.ratio};
}

DelayEstimate estimate_delay(const CVector& c) {
    if (c.size() < 2) throw std::domain_error("estimate_delay: need N_sc >= 2");
    require_nonzero(c, "estimate_delay");
    const CMatrix spectrum = kernels::serial::dft_rows(c.transpose(), kernels::DftSign::Inverse);
    const Peak p = find_peak(spectrum.row(0).cwiseAbs2().transpose());
    return {static_cast<int>(p.index), spectrum(0, p.index) / static_cast<double>(c.size()), p.ratio};
}

double delay_from_bin(int bin, int subcarriers, double subcarrier_spacing_hz) {
    return bin / (subcarriers * subcarrier_spacing_hz);
}

double doppler_from_bin(int bin, int symbols, double symbol_duration_s) {
    return bin / (symbols * symbol_duration_s);
}

cdouble doppler_constant(int bin, int symbols) {
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(bin % symbols) / symbols);
}

cdouble estimate_gain_phase(cdouble c, cdouble doppler_correction, double tau, double carrier_hz) {
    if (std::abs(doppler_correction) == 0.0) throw std::domain_error("estimate_gain_phase: c_D must be nonzero");
    const double cycles = carrier_hz * tau;
    return c / doppler_correction * std::polar(1.0, 2.0 * kPi * (cycles - std::floor(cycles)));
}

BeamSearchResult beam_search_angles(const ObservationTensor& obs, const SteeringDictionary& dict_tx,
                                    const SteeringDictionary& dict_rx, const CMatrix& probing, int num_paths) {
    obs.validate();
    if (num_paths < 0) throw std::domain_error("beam_search_angles: negative path count");
    if (dict_rx.matrix.rows() != obs.rx) throw std::domain_error("beam_search_angles: rx dictionary size mismatch");
    if (probing.rows() != dict_tx.matrix.rows() || probing.cols() != obs.probes) {
        throw std::domain_error("beam_search_angles: probing matrix shape mismatch");
    }

    BeamSearchResult out;
    out.residual_energy = obs.energy();
    if (num_paths == 0) return out;
    if (num_paths > dict_tx.size() * dict_rx.size()) {
        throw std::domain_error("beam_search_angles: more paths than atom pairs");
    }

    // Effective transmit atoms b_j = F^T a_j as seen through the probing.
    const CMatrix tx_atoms = probing.transpose() * dict_tx.matrix;  // probes x D_tx
    RVector weights(tx_atoms.cols());
    for (Eigen::Index j = 0; j < tx_atoms.cols(); ++j) {
        const double n2 = tx_atoms.col(j).squaredNorm();
        weights(j) = n2 > 0.0 ? 1.0 / n2 : 0.0;
    }

    const double input_energy = obs.energy();
    std::vector<CMatrix> residual = obs.frames;
    std::vector<CVector> rx_sel, tx_sel;
    std::vector<std::vector<cdouble>> coeffs;

    for (int round = 0; round < num_paths; ++round) {
        RMatrix energy = kernels::parallel::correlation_energy(residual, dict_rx.matrix, tx_atoms, weights);
        for (const auto& [aod, aoa] : out.pairs) energy(aoa, aod) = -1.0;

        // Scan AoD-major so ties resolve to the lowest (aod, aoa).
        double best = -1.0, second = 0.0;
        int best_aod = 0, best_aoa = 0;
        for (int j = 0; j < energy.cols(); ++j) {
            for (int i = 0; i < energy.rows(); ++i) {
                const double e = energy(i, j);
                if (e > best) {
                    second = std::max(second, best);
                    best = e;
                    best_aod = j;
                    best_aoa = i;
                } else {
                    second = std::max(second, e);
                }
            }
        }
        if (!(best > 1e-28 * std::max(input_energy, std::numeric_limits<double>::min()))) {
            throw std::domain_error("beam_search_angles: no resolvable energy left for path " + std::to_string(round));
        }
        out.pairs.emplace_back(best_aod, best_aoa);
        out.peak_ratios.push_back(second > 0.0 ? best / second : std::numeric_limits<double>::infinity());
        rx_sel.push_back(dict_rx.matrix.col(best_aoa));
        tx_sel.push_back(tx_atoms.col(best_aod));

        // Joint least-squares fit of every chosen atom, frame by frame.
        const auto s = static_cast<Eigen::Index>(rx_sel.size());
        CMatrix gram(s, s);
        for (Eigen::Index a = 0; a < s; ++a)
            for (Eigen::Index b = 0; b < s; ++b)
                gram(a, b) = rx_sel[a].dot(rx_sel[b]) * tx_sel[a].dot(tx_sel[b]);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff())) {
            throw std::domain_error("beam_search_angles: selected atoms are not resolvable (grid collision)");
        }
        const auto solver = gram.ldlt();
        coeffs.assign(static_cast<std::size_t>(s), std::vector<cdouble>(obs.frames.size()));
        const auto frames = static_cast<long>(obs.frames.size());
        kernels::parallel::for_each_index(static_cast<int>(frames), [&](int f) {
            const CMatrix& y = obs.frames[static_cast<std::size_t>(f)];
            CVector rhs(s);
            for (Eigen::Index a = 0; a < s; ++a) rhs(a) = rx_sel[a].dot(y * tx_sel[a].conjugate());
            const CVector sigma = solver.solve(rhs);
            CMatrix r = y;
            for (Eigen::Index a = 0; a < s; ++a) {
                coeffs[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)] = sigma(a);
                r.noalias() -= sigma(a) * rx_sel[a] * tx_sel[a].transpose();
            }
            residual[static_cast<std::size_t>(f)] = std::move(r);
        });
    }

    out.residual_energy = 0.0;
    for (const auto& r : residual) out.residual_energy += r.squaredNorm();
    for (const auto& c : coeffs) {
        CMatrix series(obs.subcarriers, obs.symbols);
        for (int n = 0; n < obs.subcarriers; ++n)
            for (int t = 0; t < obs.symbols; ++t) series(n, t) = c[static_cast<std::size_t>(n * obs.symbols + t)];
        out.series.push_back(std::move(series));
    }
    return out;
}

EstimationReport estimate_paths(const ObservationTensor& obs, const SteeringDictionary& dict_tx,
                                const SteeringDictionary& dict_rx, const CMatrix& probing, int num_paths,
                                StageOrder order) {
    EstimationReport report;
    report.input_energy = obs.energy();
    const BeamSearchResult beams = beam_search_angles(obs, dict_tx, dict_rx, probing, num_paths);
    report.residual_energy = beams.residual_energy;
    report.beam_peak_ratios = beams.peak_ratios;
    if (num_paths == 0) return report;
    if (obs.symbols < 2 || obs.subcarriers < 2) throw std::domain_error("estimate_paths: need T >= 2 and N_sc >= 2");

    const double t_count = obs.symbols;
    const double n_count = obs.subcarriers;
    for (std::size_t l = 0; l < beams.pairs.size(); ++l) {
        const CMatrix& series = beams.series[l];  // N_sc x T
        PathEstimate est;
        est.aod_index = beams.pairs[l].first;
        est.aoa_index = beams.pairs[l].second;
        est.aod = dict_tx.grid_angles(est.aod_index);
        est.aoa = dict_rx.grid_angles(est.aoa_index);

        cdouble alpha_tilde;
        if (order == StageOrder::DopplerFirst) {
            // T-point transform per subcarrier, common bin by aggregate energy.
            const CMatrix spectra = kernels::parallel::dft_rows(series, kernels::DftSign::Forward);
            const Peak doppler = find_peak(spectra.cwiseAbs2().colwise().sum().transpose());
            const CVector c = spectra.col(doppler.index) / t_count;
            const DelayEstimate delay = estimate_delay(c);
            est.doppler_bin = static_cast<int>(doppler.index);
            est.delay_bin = delay.bin;
            alpha_tilde = delay.value;
            report.doppler_peak_ratios.push_back(doppler.ratio);
            report.delay_peak_ratios.push_back(delay.peak_ratio);
        } else {
            // N-point transform per symbol, common bin by aggregate energy.
            const CMatrix spectra = kernels::parallel::dft_rows(series.transpose(), kernels::DftSign::Inverse);
            const Peak delay = find_peak(spectra.cwiseAbs2().colwise().sum().transpose());
            const CVector h = spectra.col(delay.index) / n_count;
            const DopplerEstimate doppler = estimate_doppler(h);
            est.doppler_bin = doppler.bin;
            est.delay_bin = static_cast<int>(delay.index);
            alpha_tilde = doppler.value;
            report.doppler_peak_ratios.push_back(doppler.peak_ratio);
            report.delay_peak_ratios.push_back(delay.ratio);
        }
        est.delay_s = delay_from_bin(est.delay_bin, obs.subcarriers, obs.subcarrier_spacing_hz);
        est.doppler_hz = doppler_from_bin(est.doppler_bin, obs.symbols, obs.symbol_duration_s);
        est.gain = estimate_gain_phase(alpha_tilde, doppler_constant(est.doppler_bin, obs.symbols), est.delay_s,
                                       obs.carrier_hz);
        report.paths.push_back(est);
    }
    return report;
}

ObservationTensor simulate_observations(const MmWaveChannelSpec& spec, const CMatrix& probing, int subcarriers,
                                        double subcarrier_spacing_hz, int symbols, double noise_variance,
                                        CounterRng& rng) {
    spec.validate();
    if (probing.rows() != spec.tx.elements) throw std::domain_error("simulate_observations: probing has wrong M");
    if (noise_variance < 0.0) throw std::domain_error("simulate_observations: negative noise variance");
    ObservationTensor obs(subcarriers, symbols, spec.rx.elements, static_cast<int>(probing.cols()));
    obs.subcarrier_spacing_hz = subcarrier_spacing_hz;
    obs.symbol_duration_s = spec.symbol_duration_s;
    obs.carrier_hz = spec.carrier_hz;
    for (int n = 0; n < subcarriers; ++n) {
        for (int t = 0; t < symbols; ++t) {
            CMatrix y = synthesize_subcarrier_channel(spec, t + 1, n, subcarrier_spacing_hz) * probing;
            if (noise_variance > 0.0) y += rng.complex_gaussian_matrix(y.rows(), y.cols(), noise_variance);
            obs.frame(n, t) = std::move(y);
        }
    }
    return obs;
}

PathParameters on_grid_path(const OnGridPath& g, const SteeringDictionary& dict_tx, const SteeringDictionary& dict_rx,
                            int subcarriers, double subcarrier_spacing_hz, int symbols, double symbol_duration_s) {
    PathParameters p;
    p.gain = g.gain;
    p.aod = dict_tx.grid_angles(g.aod_index);
    p.aoa = dict_rx.grid_angles(g.aoa_index);
    p.doppler_hz = doppler_from_bin(g.doppler_bin, symbols, symbol_duration_s);
    p.delay_s = delay_from_bin(g.delay_bin, subcarriers, subcarrier_spacing_hz);
    return p;
}

std::vector<OnGridPath> draw_on_grid_paths(int paths, int tx_grid, int rx_grid, int symbols, int subcarriers,
                                           CounterRng& rng) {
    if (paths > tx_grid * rx_grid) throw std::domain_error("draw_on_grid_paths: more paths than atom pairs");
    std::vector<OnGridPath> out;
    while (static_cast<int>(out.size()) < paths) {
        OnGridPath g;
        g.aod_index = rng.uniform_int(tx_grid);
        g.aoa_index = rng.uniform_int(rx_grid);
        g.doppler_bin = rng.uniform_int(symbols);
        g.delay_bin = rng.uniform_int(subcarriers);
        g.gain = rng.complex_gaussian();
        bool clash = false;
        for (const auto& o : out) clash |= (o.aod_index == g.aod_index && o.aoa_index == g.aoa_index);
        if (!clash) out.push_back(g);
    }
    return out;
}

}  // namespace isac
