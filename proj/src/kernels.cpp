// SPDX-License-Identifier: Apache-2.0

#include "isac/kernels.hpp"

#include "isac/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace isac::kernels {

namespace {

std::vector<cdouble> twiddles(Eigen::Index len, DftSign sign) {
    std::vector<cdouble> tw(static_cast<std::size_t>(len));
    const double dir = sign == DftSign::Forward ? -1.0 : 1.0;
    for (Eigen::Index k = 0; k < len; ++k) {
        tw[static_cast<std::size_t>(k)] = std::polar(1.0, dir * 2.0 * kPi * static_cast<double>(k) / len);
    }
    return tw;
}

void dft_row(const CMatrix& x, CMatrix& out, Eigen::Index r, const std::vector<cdouble>& tw) {
    const Eigen::Index len = x.cols();
    for (Eigen::Index k = 0; k < len; ++k) {
        cdouble acc{0.0, 0.0};
        for (Eigen::Index n = 0; n < len; ++n) acc += x(r, n) * tw[static_cast<std::size_t>((n * k) % len)];
        out(r, k) = acc;
    }
}

CMatrix frame_correlation(const CMatrix& frame, const CMatrix& rx_atoms, const CMatrix& tx_conj) {
    return rx_atoms.adjoint() * frame * tx_conj;
}

double rotation_objective(const RotationScan& scan, int k) {
    const auto g = static_cast<int>(scan.factor->cols());
    const auto t = static_cast<int>(scan.c->cols());
    const CMatrix w = random_semi_unitary(g, t, scan.seed, static_cast<std::uint64_t>(k));
    return ((*scan.hc) * (*scan.factor) * w - *scan.c).squaredNorm();
}

void check_correlation_args(const std::vector<CMatrix>& frames, const CMatrix& rx_atoms, const CMatrix& tx_atoms,
                            const RVector& weights) {
    if (weights.size() != tx_atoms.cols()) throw std::domain_error("correlation_energy: weight count mismatch");
    for (const auto& f : frames) {
        if (f.rows() != rx_atoms.rows() || f.cols() != tx_atoms.rows()) {
            throw std::domain_error("correlation_energy: frame size mismatch");
        }
    }
}

}  // namespace

CMatrix random_semi_unitary(int rows, int cols, std::uint64_t seed, std::uint64_t index) {
    if (cols < rows) throw std::domain_error("random_semi_unitary: need cols >= rows");
    CounterRng rng(seed, index);
    const CMatrix z = rng.complex_gaussian_matrix(cols, rows);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(cols, rows);
    return q.adjoint();
}

namespace serial {

CMatrix dft_rows(const CMatrix& x, DftSign sign) {
    CMatrix out(x.rows(), x.cols());
    const auto tw = twiddles(x.cols(), sign);
    for (Eigen::Index r = 0; r < x.rows(); ++r) dft_row(x, out, r, tw);
    return out;
}

RMatrix correlation_energy(const std::vector<CMatrix>& frames, const CMatrix& rx_atoms, const CMatrix& tx_atoms,
                           const RVector& weights) {
    check_correlation_args(frames, rx_atoms, tx_atoms, weights);
    const CMatrix tx_conj = tx_atoms.conjugate();
    RMatrix energy = RMatrix::Zero(rx_atoms.cols(), tx_atoms.cols());
    for (const auto& f : frames) energy += frame_correlation(f, rx_atoms, tx_conj).cwiseAbs2();
    return energy * weights.asDiagonal();
}

double min_rotation_objective(const RotationScan& scan) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < scan.count; ++k) best = std::min(best, rotation_objective(scan, k));
    return best;
}

}  // namespace serial

namespace parallel {

CMatrix dft_rows(const CMatrix& x, DftSign sign) {
    CMatrix out(x.rows(), x.cols());
    const auto tw = twiddles(x.cols(), sign);
    const auto rows = static_cast<long>(x.rows());
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) dft_row(x, out, r, tw);
    return out;
}

RMatrix correlation_energy(const std::vector<CMatrix>& frames, const CMatrix& rx_atoms, const CMatrix& tx_atoms,
                           const RVector& weights) {
    check_correlation_args(frames, rx_atoms, tx_atoms, weights);
    const CMatrix tx_conj = tx_atoms.conjugate();
    const auto count = static_cast<long>(frames.size());
    std::vector<RMatrix> per_frame(frames.size());
#pragma omp parallel for schedule(static)
    for (long f = 0; f < count; ++f) {
        per_frame[static_cast<std::size_t>(f)] = frame_correlation(frames[static_cast<std::size_t>(f)], rx_atoms, tx_conj).cwiseAbs2();
    }
    // Sum in frame order per output cell, matching the serial accumulation.
    RMatrix energy = RMatrix::Zero(rx_atoms.cols(), tx_atoms.cols());
    const long cells = static_cast<long>(energy.size());
#pragma omp parallel for schedule(static)
    for (long cell = 0; cell < cells; ++cell) {
        double acc = 0.0;
        for (const auto& e : per_frame) acc += e.data()[cell];
        energy.data()[cell] = acc;
    }
    return energy * weights.asDiagonal();
}

double min_rotation_objective(const RotationScan& scan) {
    double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : best)
    for (int k = 0; k < scan.count; ++k) best = std::min(best, rotation_objective(scan, k));
    return best;
}

void for_each_index(int n, const std::function<void(int)>& fn) {
    // Exceptions cannot cross the parallel region; keep the lowest-index one.
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace parallel

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace isac::kernels
