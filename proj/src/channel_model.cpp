// SPDX-License-Identifier: Apache-2.0

#include "isac/channel_model.hpp"

#include "isac/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace isac {

namespace {

constexpr double kAngleSlack = 1e-12;

void check_angle(double angle, const char* what) {
    if (!std::isfinite(angle) || std::abs(angle) > kPi / 2 + kAngleSlack) {
        throw std::domain_error(std::string(what) + ": angle outside [-pi/2, pi/2]");
    }
}

// exp(-j 2 pi x) with x reduced to [0, 1) first, so large f*tau products
// keep their fractional part.
cdouble cis_neg(double x) { return std::polar(1.0, -2.0 * kPi * (x - std::floor(x))); }

}  // namespace

ArrayGeometry::ArrayGeometry(int n, double spacing_ratio) : elements(n), spacing(spacing_ratio) {
    if (n < 1) throw std::domain_error("ArrayGeometry: element count must be >= 1");
    if (!(spacing_ratio > 0.0)) throw std::domain_error("ArrayGeometry: spacing must be > 0");
}

double ArrayGeometry::normalized(double angle) const { return spacing * std::sin(angle); }

void MmWaveChannelSpec::validate() const {
    if (tx.elements < 1 || rx.elements < 1) throw std::domain_error("channel spec: empty array");
    if (!(tx.spacing > 0) || !(rx.spacing > 0)) throw std::domain_error("channel spec: spacing must be > 0");
    if (paths.empty()) throw std::domain_error("channel spec: path list is empty");
    if (!(carrier_hz > 0)) throw std::domain_error("channel spec: carrier must be > 0");
    if (!(symbol_duration_s > 0)) throw std::domain_error("channel spec: symbol duration must be > 0");
    for (const auto& p : paths) {
        check_angle(p.aod, "channel spec AoD");
        check_angle(p.aoa, "channel spec AoA");
        if (!(p.delay_s >= 0)) throw std::domain_error("channel spec: negative delay");
        if (!std::isfinite(p.doppler_hz) || !std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag()))
            throw std::domain_error("channel spec: non-finite path parameter");
    }
}

CVector steering_vector_normalized(int elements, double vartheta) {
    CVector a(elements);
    const double norm = 1.0 / std::sqrt(static_cast<double>(elements));
    for (int n = 0; n < elements; ++n) a(n) = norm * cis_neg(n * vartheta);
    return a;
}

CVector steering_vector(const ArrayGeometry& geom, double angle) {
    check_angle(angle, "steering_vector");
    return steering_vector_normalized(geom.elements, geom.normalized(angle));
}

cdouble path_coefficient(const PathParameters& p, double carrier_hz, double symbol_duration_s, int t) {
    return p.gain * cis_neg(carrier_hz * p.delay_s) * std::conj(cis_neg(t * p.doppler_hz * symbol_duration_s));
}

ChannelMatrix synthesize_channel(const MmWaveChannelSpec& spec, int t) {
    return synthesize_subcarrier_channel(spec, t, 0, 0.0);
}

ChannelMatrix synthesize_subcarrier_channel(const MmWaveChannelSpec& spec, int t, int subcarrier,
                                            double subcarrier_spacing_hz) {
    spec.validate();
    if (t < 1) throw std::domain_error("synthesize_channel: symbol index t is 1-based");
    ChannelMatrix h = ChannelMatrix::Zero(spec.rx.elements, spec.tx.elements);
    for (const auto& p : spec.paths) {
        cdouble c = path_coefficient(p, spec.carrier_hz, spec.symbol_duration_s, t);
        if (subcarrier != 0) c *= cis_neg(subcarrier * subcarrier_spacing_hz * p.delay_s);
        h.noalias() += c * steering_vector(spec.rx, p.aoa) * steering_vector(spec.tx, p.aod).transpose();
    }
    return h;
}

ChannelMatrix synthesize_channel_factored(const MmWaveChannelSpec& spec, int t) {
    spec.validate();
    if (t < 1) throw std::domain_error("synthesize_channel: symbol index t is 1-based");
    const auto paths = static_cast<Eigen::Index>(spec.paths.size());
    CMatrix a_rx(spec.rx.elements, paths), a_tx(spec.tx.elements, paths);
    CVector alpha(paths), delay(paths), doppler(paths);
    for (Eigen::Index l = 0; l < paths; ++l) {
        const auto& p = spec.paths[static_cast<std::size_t>(l)];
        a_rx.col(l) = steering_vector(spec.rx, p.aoa);
        a_tx.col(l) = steering_vector(spec.tx, p.aod);
        alpha(l) = p.gain;
        delay(l) = cis_neg(spec.carrier_hz * p.delay_s);
        doppler(l) = std::conj(cis_neg(t * p.doppler_hz * spec.symbol_duration_s));
    }
    return a_rx * alpha.asDiagonal() * delay.asDiagonal() * doppler.asDiagonal() * a_tx.transpose();
}

SteeringDictionary build_dictionary(const ArrayGeometry& geom, int grid_size) {
    if (grid_size < geom.elements) throw std::domain_error("build_dictionary: grid size below element count");
    if (geom.spacing < 0.5) {
        throw std::domain_error("build_dictionary: spacing below half a wavelength cannot reach a full period");
    }
    SteeringDictionary dict;
    dict.geometry = geom;
    dict.grid_normalized.resize(grid_size);
    dict.grid_angles.resize(grid_size);
    dict.matrix.resize(geom.elements, grid_size);
    for (int i = 0; i < grid_size; ++i) {
        const double v = -0.5 + static_cast<double>(i) / grid_size;
        dict.grid_normalized(i) = v;
        dict.grid_angles(i) = std::asin(v / geom.spacing);
        dict.matrix.col(i) = steering_vector_normalized(geom.elements, v);
    }
    return dict;
}

std::pair<int, double> SteeringDictionary::nearest_index(double vartheta) const {
    const int d = size();
    double pos = (vartheta + 0.5) * d;
    pos -= d * std::floor(pos / d);
    int idx = static_cast<int>(std::lround(pos)) % d;
    double dist = std::abs(pos - std::lround(pos)) / d;
    return {idx, dist};
}

VirtualChannel virtual_coefficients(const MmWaveChannelSpec& spec, int t, const SteeringDictionary& dict_rx,
                                    const SteeringDictionary& dict_tx) {
    spec.validate();
    if (dict_rx.geometry.elements != spec.rx.elements || dict_tx.geometry.elements != spec.tx.elements) {
        throw std::domain_error("virtual_coefficients: dictionary/array size mismatch");
    }
    VirtualChannel out;
    out.coefficients = CMatrix::Zero(dict_rx.size(), dict_tx.size());
    for (const auto& p : spec.paths) {
        auto [rx_idx, rx_dist] = dict_rx.nearest_index(spec.rx.normalized(p.aoa));
        auto [tx_idx, tx_dist] = dict_tx.nearest_index(spec.tx.normalized(p.aod));
        out.coefficients(rx_idx, tx_idx) += path_coefficient(p, spec.carrier_hz, spec.symbol_duration_s, t);
        out.positions.emplace_back(rx_idx, tx_idx);
        out.max_snap_distance = std::max({out.max_snap_distance, rx_dist, tx_dist});
    }
    return out;
}

ChannelMatrix random_channel(int rows, int cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::domain_error("random_channel: dimensions must be >= 1");
    CounterRng rng(seed);
    return rng.complex_gaussian_matrix(rows, cols);
}

}  // namespace isac
