// SPDX-License-Identifier: Apache-2.0

#include "isac/sensing_capacity.hpp"

#include "isac/linalg.hpp"

#include <cmath>

namespace isac {

ChannelCovariance::ChannelCovariance(CMatrix q) : q_(std::move(q)) {
    if (!linalg::is_psd(q_, 1e-10)) throw std::domain_error("ChannelCovariance: matrix is not Hermitian PSD");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(q_));
    const RVector& ev = es.eigenvalues();  // ascending
    const double largest = ev.size() ? ev(ev.size() - 1) : 0.0;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
        if (largest > 0.0 && ev(i) > kRankTolerance * largest) keep.push_back(i);
    }
    v_.resize(q_.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t g = 0; g < keep.size(); ++g) {
        lambda_.push_back(ev(keep[g]));
        v_.col(static_cast<Eigen::Index>(g)) = es.eigenvectors().col(keep[g]);
    }
}

namespace {
void check_rate_args(const CMatrix& x, const ChannelCovariance& qh, int rx_count, int t) {
    if (t < 1 || rx_count < 1) throw std::domain_error("estimation_rate: T and N must be >= 1");
    if (x.rows() != t || x.cols() != qh.dimension()) throw std::domain_error("estimation_rate: dimension mismatch");
}
}  // namespace

double estimation_rate(const CMatrix& x, const ChannelCovariance& qh, const NoiseSpec& noise, int rx_count, int t) {
    check_rate_args(x, qh, rx_count, t);
    const auto m = qh.dimension();
    CMatrix a = CMatrix::Identity(m, m) + qh.matrix() * (x.adjoint() * x) / noise.variance();
    return std::max(0.0, static_cast<double>(rx_count) / t * linalg::log2_abs_det(a));
}

double estimation_rate_tside(const CMatrix& x, const ChannelCovariance& qh, const NoiseSpec& noise, int rx_count,
                             int t) {
    check_rate_args(x, qh, rx_count, t);
    CMatrix a = CMatrix::Identity(t, t) + linalg::hermitian_part(x * qh.matrix() * x.adjoint()) / noise.variance();
    return std::max(0.0, static_cast<double>(rx_count) / t * linalg::log2_det_hpd(a));
}

SensingWaveform optimal_sensing_waveform(const ChannelCovariance& qh, int t, double power_per_transmission,
                                         const NoiseSpec& noise) {
    const int g = qh.rank();
    if (t < 1) throw std::domain_error("optimal_sensing_waveform: T must be >= 1");
    if (t < g) throw std::domain_error("optimal_sensing_waveform: T smaller than rank(Q_h)");
    if (!(power_per_transmission > 0.0)) throw std::domain_error("optimal_sensing_waveform: P_t must be > 0");

    SensingWaveform out;
    out.eigvecs = qh.eigenvectors();
    out.orthobasis = linalg::unitary_dft(t).leftCols(g);
    if (g == 0) {
        out.block = CMatrix::Zero(t, qh.dimension());
        out.allocation.budget = t * power_per_transmission;
        return out;
    }
    out.allocation = waterfill(qh.eigenvalues(), t * power_per_transmission, noise);
    RVector root = Eigen::Map<const RVector>(out.allocation.levels.data(), g).cwiseSqrt();
    out.block = out.orthobasis * root.cast<cdouble>().asDiagonal() * out.eigvecs.adjoint();
    return out;
}

EstimationRateResult sensing_capacity(const ChannelCovariance& qh, int rx_count, int t,
                                      double power_per_transmission, const NoiseSpec& noise) {
    if (rx_count < 1 || t < 1) throw std::domain_error("sensing_capacity: N and T must be >= 1");
    if (!(power_per_transmission > 0.0)) throw std::domain_error("sensing_capacity: P_t must be > 0");
    if (t < qh.rank()) throw std::domain_error("sensing_capacity: T smaller than rank(Q_h)");
    EstimationRateResult out;
    if (qh.rank() == 0) {
        out.allocation.budget = t * power_per_transmission;
        return out;
    }
    out.allocation = waterfill(qh.eigenvalues(), t * power_per_transmission, noise);
    out.bits_per_transmission = static_cast<double>(rx_count) / t * allocation_rate(out.allocation, noise);
    return out;
}

}  // namespace isac
