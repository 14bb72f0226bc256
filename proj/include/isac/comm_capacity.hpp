// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/types.hpp"

#include <vector>

namespace isac {

/// Hermitian PSD transmit covariance Q_x = E[x x^H].
class TransmitCovariance {
public:
    /// Validates Hermitian / PSD to 1e-10; throws std::domain_error otherwise.
    explicit TransmitCovariance(CMatrix q);
    const CMatrix& matrix() const noexcept { return q_; }
    double trace() const { return q_.trace().real(); }

private:
    CMatrix q_;
};

/// Water-filling result. levels[g] is the power on the mode with gain
/// eigenvalues[g]; the absolute water level w satisfies
/// levels[g] = max(w - sigma^2 / eigenvalues[g], 0).
struct PowerAllocation {
    std::vector<double> levels;
    std::vector<double> eigenvalues;
    double water_level = 0.0;
    double budget = 0.0;
};

struct CapacityResult {
    double bits_per_symbol = 0.0;
    CMatrix covariance;  // Q_x = V beta V^H
    CMatrix eigenvectors;  // V_h, M x G
    PowerAllocation allocation;
};

/// log2 det(I + sigma^-2 H Q H^H), bits per symbol.
double mutual_information_comm(const ChannelMatrix& h, const TransmitCovariance& q, const NoiseSpec& noise);

PowerAllocation waterfill(const std::vector<double>& eigenvalues, double budget, const NoiseSpec& noise);

/// sum_g log2(1 + lambda_g beta_g / sigma^2).
double allocation_rate(const PowerAllocation& allocation, const NoiseSpec& noise);

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-12;

CapacityResult comm_capacity(const ChannelMatrix& h, double budget, const NoiseSpec& noise);

}  // namespace isac
