// SPDX-License-Identifier: Apache-2.0

#include "isac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace isac::linalg {

double log2_det_hpd(const CMatrix& a) {
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("log2_det_hpd: matrix is not positive definite");
    }
    const CMatrix& l = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i).real());
    return 2.0 * acc;
}

double log2_abs_det(const CMatrix& a) {
    if (a.rows() != a.cols()) throw std::domain_error("log2_abs_det: matrix is not square");
    Eigen::PartialPivLU<CMatrix> lu(a);
    const CMatrix& u = lu.matrixLU();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) acc += std::log2(std::abs(u(i, i)));
    return acc;
}

namespace {
double scale_of(const CMatrix& a) {
    return a.size() == 0 ? 1.0 : std::max(1.0, a.cwiseAbs().maxCoeff());
}
}  // namespace

bool is_hermitian(const CMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale_of(a);
}

bool is_psd(const CMatrix& a, double tol) {
    if (!is_hermitian(a, tol)) return false;
    if (a.size() == 0) return true;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol * scale_of(a);
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix psd_sqrt(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
    RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

RVector project_capped_simplex(const RVector& v, double budget) {
    RVector x = v.cwiseMax(0.0);
    if (x.sum() <= budget) return x;
    // Shift tau > 0 with sum(max(v - tau, 0)) = budget.
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - budget) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
            tau = candidate;
            break;
        }
    }
    return (v.array() - tau).cwiseMax(0.0).matrix();
}

CMatrix project_psd_trace_ball(const CMatrix& q, double budget) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(q));
    RVector lambda = project_capped_simplex(es.eigenvalues(), budget);
    return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix unitary_dft(int n) {
    CMatrix f(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // Reduce r*c mod n before forming the angle to keep phases exact.
            const double angle = -2.0 * kPi * static_cast<double>((static_cast<long>(r) * c) % n) / n;
            f(r, c) = std::polar(norm, angle);
        }
    }
    return f;
}

}  // namespace isac::linalg
