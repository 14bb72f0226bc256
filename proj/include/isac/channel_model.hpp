// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace isac {

/// Uniform linear array: element count and spacing in wavelengths (d / lambda).
struct ArrayGeometry {
    int elements = 1;
    double spacing = 0.5;

    ArrayGeometry() = default;
    ArrayGeometry(int n, double spacing_ratio = 0.5);

    /// Normalized angle vartheta = spacing * sin(angle).
    double normalized(double angle) const;
};

/// One propagation path. Angles in radians, within [-pi/2, pi/2].
struct PathParameters {
    cdouble gain{1.0, 0.0};
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    double aod = 0.0;
    double aoa = 0.0;
};

struct MmWaveChannelSpec {
    ArrayGeometry tx;  // M elements at the base station
    ArrayGeometry rx;  // N_k (user) or N_s (sensing receiver)
    std::vector<PathParameters> paths;
    double carrier_hz = 28e9;
    double symbol_duration_s = 1e-6;

    /// Throws std::domain_error on any broken invariant.
    void validate() const;
};

/// Steering dictionary on a grid uniform in normalized angle:
/// vartheta_i = -1/2 + i / D, i = 0..D-1 (one full period).
struct SteeringDictionary {
    ArrayGeometry geometry;
    RVector grid_normalized;  // vartheta_i
    RVector grid_angles;      // physical angles, arcsin(vartheta_i / spacing)
    CMatrix matrix;           // N x D, column i = a(N, theta_i)

    int size() const { return static_cast<int>(grid_normalized.size()); }
    /// Nearest grid index to a normalized angle (with wrap-around) and the
    /// distance to it in normalized units.
    std::pair<int, double> nearest_index(double vartheta) const;
    CVector atom(int i) const { return matrix.col(i); }
};

CVector steering_vector(const ArrayGeometry& geom, double angle);
/// a(N, .) evaluated directly at a normalized angle; no range restriction.
CVector steering_vector_normalized(int elements, double vartheta);

/// alpha * exp(-j 2 pi f tau) * exp(j 2 pi t f_D T_s)
cdouble path_coefficient(const PathParameters& p, double carrier_hz, double symbol_duration_s, int t);

/// Channel at 1-based symbol index t as an outer-product sum over paths.
ChannelMatrix synthesize_channel(const MmWaveChannelSpec& spec, int t);
/// Same channel via A_rx * alpha * D * O_t * A_tx^T.
ChannelMatrix synthesize_channel_factored(const MmWaveChannelSpec& spec, int t);
/// OFDM subcarrier n (0-based) with spacing df: the delay phase uses f_c + n df.
ChannelMatrix synthesize_subcarrier_channel(const MmWaveChannelSpec& spec, int t, int subcarrier,
                                            double subcarrier_spacing_hz);

SteeringDictionary build_dictionary(const ArrayGeometry& geom, int grid_size);

struct VirtualChannel {
    CMatrix coefficients;          // D_rx x D_tx
    std::vector<std::pair<int, int>> positions;  // (aoa index, aod index) per path
    double max_snap_distance = 0;  // in normalized-angle units
};

VirtualChannel virtual_coefficients(const MmWaveChannelSpec& spec, int t,
                                    const SteeringDictionary& dict_rx,
                                    const SteeringDictionary& dict_tx);

/// i.i.d. CN(0, 1) entries, reproducible per seed.
ChannelMatrix random_channel(int rows, int cols, std::uint64_t seed);

}  // namespace isac
