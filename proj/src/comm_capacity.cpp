// SPDX-License-Identifier: Apache-2.0

#include "isac/comm_capacity.hpp"

#include "isac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isac {

TransmitCovariance::TransmitCovariance(CMatrix q) : q_(std::move(q)) {
    if (!linalg::is_psd(q_, 1e-10)) throw std::domain_error("TransmitCovariance: matrix is not Hermitian PSD");
}

double mutual_information_comm(const ChannelMatrix& h, const TransmitCovariance& q, const NoiseSpec& noise) {
    if (h.cols() != q.matrix().rows()) throw std::domain_error("mutual_information_comm: dimension mismatch");
    const CMatrix hq = h * q.matrix() * h.adjoint() / noise.variance();
    CMatrix a = CMatrix::Identity(h.rows(), h.rows()) + linalg::hermitian_part(hq);
    return std::max(0.0, linalg::log2_det_hpd(a));
}

PowerAllocation waterfill(const std::vector<double>& eigenvalues, double budget, const NoiseSpec& noise) {
    if (eigenvalues.empty()) throw std::domain_error("waterfill: empty eigenvalue list");
    if (!(budget > 0.0)) throw std::domain_error("waterfill: budget must be > 0");
    for (double l : eigenvalues) {
        if (!(l > 0.0) || !std::isfinite(l)) throw std::domain_error("waterfill: eigenvalues must be positive");
    }
    const double s2 = noise.variance();

    // Visit modes strongest first; drop the weakest until every active
    // mode sits below the water level.
    std::vector<std::size_t> order(eigenvalues.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return eigenvalues[a] > eigenvalues[b]; });

    double w = 0.0;
    for (std::size_t active = order.size(); active >= 1; --active) {
        double floor_sum = 0.0;
        for (std::size_t k = 0; k < active; ++k) floor_sum += s2 / eigenvalues[order[k]];
        w = (budget + floor_sum) / static_cast<double>(active);
        if (w - s2 / eigenvalues[order[active - 1]] > 0.0) break;
    }

    PowerAllocation out;
    out.eigenvalues = eigenvalues;
    out.budget = budget;
    out.water_level = w;
    out.levels.resize(eigenvalues.size());
    for (std::size_t g = 0; g < eigenvalues.size(); ++g) {
        out.levels[g] = std::max(0.0, w - s2 / eigenvalues[g]);
    }
    return out;
}

double allocation_rate(const PowerAllocation& allocation, const NoiseSpec& noise) {
    double bits = 0.0;
    for (std::size_t g = 0; g < allocation.levels.size(); ++g) {
        bits += std::log2(1.0 + allocation.eigenvalues[g] * allocation.levels[g] / noise.variance());
    }
    return bits;
}

CapacityResult comm_capacity(const ChannelMatrix& h, double budget, const NoiseSpec& noise) {
    if (h.size() == 0 || h.cwiseAbs().maxCoeff() == 0.0) throw std::domain_error("comm_capacity: zero channel");
    if (!(budget > 0.0)) throw std::domain_error("comm_capacity: budget must be > 0");

    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();  // descending
    const double largest = sv(0) * sv(0);
    std::vector<double> lambda;
    for (Eigen::Index g = 0; g < sv.size(); ++g) {
        const double l = sv(g) * sv(g);
        if (l > kRankTolerance * largest) lambda.push_back(l);
    }
    const auto rank = static_cast<Eigen::Index>(lambda.size());

    CapacityResult out;
    out.allocation = waterfill(lambda, budget, noise);
    out.eigenvectors = svd.matrixV().leftCols(rank);
    RVector beta = Eigen::Map<const RVector>(out.allocation.levels.data(), rank);
    out.covariance = out.eigenvectors * beta.cast<cdouble>().asDiagonal() * out.eigenvectors.adjoint();
    out.bits_per_symbol = allocation_rate(out.allocation, noise);
    return out;
}

}  // namespace isac
