// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/comm_capacity.hpp"
#include "isac/types.hpp"

namespace isac {

/// Second-order statistics Q_h = E[h_n h_n^H] of the sensed channel columns.
class ChannelCovariance {
public:
    explicit ChannelCovariance(CMatrix q);

    const CMatrix& matrix() const noexcept { return q_; }
    Eigen::Index dimension() const noexcept { return q_.rows(); }
    /// Non-zero eigenpairs, eigenvalues descending.
    const std::vector<double>& eigenvalues() const noexcept { return lambda_; }
    const CMatrix& eigenvectors() const noexcept { return v_; }
    int rank() const noexcept { return static_cast<int>(lambda_.size()); }

private:
    CMatrix q_;
    std::vector<double> lambda_;
    CMatrix v_;
};

/// Probing block X = U_x beta^{1/2} V_h^H (T x M).
struct SensingWaveform {
    CMatrix block;
    CMatrix orthobasis;  // U_x, T x G
    CMatrix eigvecs;     // V_h, M x G
    PowerAllocation allocation;
};

struct EstimationRateResult {
    double bits_per_transmission = 0.0;
    PowerAllocation allocation;
};

/// (N/T) log2 det(I_M + sigma^-2 Q_h X^H X), X is T x M.
double estimation_rate(const CMatrix& x, const ChannelCovariance& qh, const NoiseSpec& noise, int rx_count, int t);
/// Same quantity through the T x T determinant (N/T) log2 det(I_T + sigma^-2 X Q_h X^H).
double estimation_rate_tside(const CMatrix& x, const ChannelCovariance& qh, const NoiseSpec& noise, int rx_count,
                             int t);

SensingWaveform optimal_sensing_waveform(const ChannelCovariance& qh, int t, double power_per_transmission,
                                         const NoiseSpec& noise);

EstimationRateResult sensing_capacity(const ChannelCovariance& qh, int rx_count, int t,
                                      double power_per_transmission, const NoiseSpec& noise);

}  // namespace isac
