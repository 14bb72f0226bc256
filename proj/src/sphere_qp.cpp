// SPDX-License-Identifier: Apache-2.0

#include "isac/sphere_qp.hpp"

#include "isac/linalg.hpp"

#include <cmath>
#include <limits>

namespace isac {

double sphere_qp_objective(const CMatrix& a, const CMatrix& b, const CMatrix& x) {
    return (x.adjoint() * a * x).trace().real() - 2.0 * (x.adjoint() * b).trace().real();
}

SphereQpSolution solve_sphere_qp(const CMatrix& a, const CMatrix& b, double energy) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) throw std::domain_error("solve_sphere_qp: dimension mismatch");
    if (!(energy > 0.0)) throw std::domain_error("solve_sphere_qp: energy target must be > 0");

    Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(a));
    const RVector& ev = es.eigenvalues();  // ascending
    const CMatrix& v = es.eigenvectors();
    const CMatrix bt = v.adjoint() * b;
    const Eigen::Index n = ev.size();
    RVector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = bt.row(i).squaredNorm();

    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double a_min = ev(0);
    const double total_w = w.sum();
    double cluster_w = 0.0;
    Eigen::Index cluster_end = 0;
    while (cluster_end < n && ev(cluster_end) - a_min <= 1e-12 * scale) cluster_w += w(cluster_end++);

    auto energy_at = [&](double lambda, Eigen::Index from) {
        double e = 0.0;
        for (Eigen::Index i = from; i < n; ++i) e += w(i) / ((ev(i) + lambda) * (ev(i) + lambda));
        return e;
    };
    auto solution_at = [&](double lambda, Eigen::Index from) {
        CMatrix xt = CMatrix::Zero(n, b.cols());
        for (Eigen::Index i = from; i < n; ++i) xt.row(i) = bt.row(i) / (ev(i) + lambda);
        return xt;
    };

    SphereQpSolution out;
    const bool cluster_empty = cluster_w <= 1e-24 * std::max(total_w, std::numeric_limits<double>::min());
    if (cluster_empty && energy_at(-a_min, cluster_end) < energy) {
        // Hard case: lambda pinned at -a_min, top up the energy along the
        // smallest-eigenvalue direction.
        out.hard_case = true;
        out.lambda = -a_min;
        CMatrix xt = solution_at(-a_min, cluster_end);
        const double remaining = energy - xt.squaredNorm();
        xt(0, 0) += std::sqrt(std::max(remaining, 0.0));
        out.x = v * xt;
        return out;
    }

    // phi(lambda) = ||X(lambda)||^2 decreases on (-a_min, inf); solve
    // 1/sqrt(phi) = 1/sqrt(energy) by safeguarded Newton.
    double lo = -a_min;
    double hi = -a_min + std::sqrt(total_w / energy) + 1e-300;
    double lambda = hi;
    const double target = 1.0 / std::sqrt(energy);
    for (int iter = 0; iter < 500; ++iter) {
        const double phi = energy_at(lambda, 0);
        if (phi > energy) lo = lambda; else hi = lambda;
        if (std::abs(phi - energy) <= 4 * std::numeric_limits<double>::epsilon() * energy) break;
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lambda))) break;
        double dphi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) dphi += -2.0 * w(i) / std::pow(ev(i) + lambda, 3);
        // d/dlambda phi^{-1/2} = -1/2 phi^{-3/2} dphi
        const double psi = 1.0 / std::sqrt(phi) - target;
        const double dpsi = -0.5 * std::pow(phi, -1.5) * dphi;
        double next = lambda - psi / dpsi;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        lambda = next;
    }
    out.lambda = lambda;
    CMatrix xt = solution_at(lambda, 0);
    const double norm2 = xt.squaredNorm();
    if (norm2 > 0.0) xt *= std::sqrt(energy / norm2);
    out.x = v * xt;
    return out;
}

}  // namespace isac
