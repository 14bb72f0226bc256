// SPDX-License-Identifier: Apache-2.0

#include "isac/isac_waveform.hpp"

#include "isac/linalg.hpp"
#include "isac/sphere_qp.hpp"

#include <cmath>
#include <limits>

namespace isac {

TradeoffWeight::TradeoffWeight(double rho) : rho_(rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("TradeoffWeight: rho must lie in [0, 1]");
}

RadarCovariance::RadarCovariance(CMatrix rs) : rs_(std::move(rs)) {
    if (!linalg::is_psd(rs_, 1e-10)) throw std::domain_error("RadarCovariance: matrix is not Hermitian PSD");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(rs_));
    const RVector& ev = es.eigenvalues();
    const double largest = ev.size() ? ev(ev.size() - 1) : 0.0;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
        if (largest > 0.0 && ev(i) > kRankTolerance * largest) keep.push_back(i);
    }
    factor_.resize(rs_.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t g = 0; g < keep.size(); ++g) {
        factor_.col(static_cast<Eigen::Index>(g)) = es.eigenvectors().col(keep[g]) * std::sqrt(ev(keep[g]));
    }
}

RadarCovariance RadarCovariance::from_waveform(const CMatrix& xs, int t) {
    if (t < 1) throw std::domain_error("RadarCovariance: T must be >= 1");
    return RadarCovariance(linalg::hermitian_part(xs * xs.adjoint()) / static_cast<double>(t));
}

double interference_power(const WaveformBlock& xc, const ChannelMatrix& hc, const SymbolBlock& c) {
    if (hc.cols() != xc.rows() || hc.rows() != c.rows() || xc.cols() != c.cols()) {
        throw std::domain_error("interference_power: dimension mismatch");
    }
    return (hc * xc - c).squaredNorm();
}

// ---------------------------------------------------------------------------
// Weighted mutual information

WeightedMiProblem make_weighted_mi_problem(const ChannelMatrix& hc, const ChannelCovariance& qh,
                                           const NoiseSpec& noise, int t, int ns, double budget) {
    if (hc.cols() != qh.dimension()) throw std::domain_error("weighted MI: Hc and Q_h disagree on M");
    const double cc = comm_capacity(hc, budget, noise).bits_per_symbol;
    const double cs = sensing_capacity(qh, ns, t, budget, noise).bits_per_transmission;
    return WeightedMiProblem{hc, qh, noise, t, ns, budget, cc, cs};
}

double comm_information(const CMatrix& q, const WeightedMiProblem& p) {
    const auto n = p.hc.rows();
    CMatrix a = CMatrix::Identity(n, n) + linalg::hermitian_part(p.hc * q * p.hc.adjoint()) / p.noise.variance();
    return linalg::log2_det_hpd(a);
}

double sensing_information(const CMatrix& q, const WeightedMiProblem& p) {
    const auto m = p.qh.dimension();
    CMatrix a = CMatrix::Identity(m, m) + p.qh.matrix() * q * (p.t / p.noise.variance());
    return static_cast<double>(p.ns) / p.t * linalg::log2_abs_det(a);
}

namespace {

void check_normalizers(const WeightedMiProblem& p) {
    if (!(p.comm_normalizer > 0.0) || !(p.sensing_normalizer > 0.0)) {
        throw std::domain_error("weighted MI: normalizers must be > 0");
    }
}

double objective_of(const CMatrix& q, const WeightedMiProblem& p, double rho) {
    double f = 0.0;
    if (rho > 0.0) f += rho / p.comm_normalizer * comm_information(q, p);
    if (rho < 1.0) f += (1.0 - rho) / p.sensing_normalizer * sensing_information(q, p);
    return f;
}

}  // namespace

double weighted_mi_objective(const TransmitCovariance& q, const WeightedMiProblem& p, TradeoffWeight rho) {
    check_normalizers(p);
    if (q.matrix().rows() != p.qh.dimension()) throw std::domain_error("weighted MI: Q has the wrong size");
    return objective_of(q.matrix(), p, rho);
}

CMatrix weighted_mi_gradient(const CMatrix& q, const WeightedMiProblem& p, TradeoffWeight rho) {
    check_normalizers(p);
    const double s2 = p.noise.variance();
    const auto m = p.qh.dimension();
    CMatrix g = CMatrix::Zero(m, m);
    if (rho > 0.0) {
        const auto n = p.hc.rows();
        CMatrix inner = CMatrix::Identity(n, n) * s2 + p.hc * q * p.hc.adjoint();
        g += rho / p.comm_normalizer / std::log(2.0) * p.hc.adjoint() * inner.ldlt().solve(p.hc);
    }
    if (rho < 1.0) {
        const CMatrix root = linalg::psd_sqrt(p.qh.matrix());
        const double a = p.t / s2;
        CMatrix inner = CMatrix::Identity(m, m) + a * root * q * root;
        g += (1.0 - rho.value()) / p.sensing_normalizer * p.ns / p.t / std::log(2.0) * a * root *
             inner.ldlt().solve(root);
    }
    return linalg::hermitian_part(g);
}

WeightedMiSolution optimize_weighted_mi(const WeightedMiProblem& p, TradeoffWeight rho) {
    check_normalizers(p);
    if (!(p.budget > 0.0)) throw std::domain_error("optimize_weighted_mi: budget must be > 0");
    const auto m = p.qh.dimension();

    // Start from the best of the two single-objective optima and the isotropic point.
    std::vector<CMatrix> starts;
    starts.push_back(comm_capacity(p.hc, p.budget, p.noise).covariance);
    if (p.qh.rank() <= p.t) {
        const SensingWaveform sw = optimal_sensing_waveform(p.qh, p.t, p.budget, p.noise);
        starts.push_back(linalg::hermitian_part(sw.block.adjoint() * sw.block) / static_cast<double>(p.t));
    }
    starts.push_back(CMatrix::Identity(m, m) * (p.budget / static_cast<double>(m)));

    WeightedMiSolution sol;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        const CMatrix q = linalg::project_psd_trace_ball(s, p.budget);
        const double f = objective_of(q, p, rho);
        if (f > best) {
            best = f;
            sol.q = q;
        }
    }
    sol.objective = best;

    double step = 1.0;
    for (int it = 0; it < kWeightedMiMaxIterations; ++it) {
        const CMatrix g = weighted_mi_gradient(sol.q, p, rho);
        sol.stationarity = (sol.q - linalg::project_psd_trace_ball(sol.q + g, p.budget)).norm();
        sol.iterations = it;
        if (sol.stationarity < kWeightedMiTolerance) return sol;

        bool accepted = false;
        for (int halving = 0; halving < 80; ++halving) {
            CMatrix next = linalg::project_psd_trace_ball(sol.q + step * g, p.budget);
            const CMatrix d = next - sol.q;
            const double f = objective_of(next, p, rho);
            const double model = sol.objective + (g.adjoint() * d).trace().real() - d.squaredNorm() / (2.0 * step);
            if (f >= model) {
                sol.q = std::move(next);
                sol.objective = f;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        step = std::min(step * 2.0, 1e6);
    }
    throw ConvergenceError("optimize_weighted_mi: no convergence, stationarity " + std::to_string(sol.stationarity),
                           sol.q, sol.objective, sol.iterations);
}

// ---------------------------------------------------------------------------
// Least-squares waveform designs

WaveformBlock solve_covariance_constrained(const ChannelMatrix& hc, const SymbolBlock& c, const RadarCovariance& rs,
                                           int t) {
    if (hc.rows() != c.rows() || hc.cols() != rs.matrix().rows() || c.cols() != t) {
        throw std::domain_error("solve_covariance_constrained: dimension mismatch");
    }
    const int g = rs.rank();
    if (g == 0) throw std::domain_error("solve_covariance_constrained: radar covariance is zero");
    if (t < g) throw std::domain_error("solve_covariance_constrained: T smaller than rank(R_s)");

    const CMatrix f = rs.factor() * std::sqrt(static_cast<double>(t));  // F F^H = T R_s
    const CMatrix cross = f.adjoint() * hc.adjoint() * c;               // G x T
    Eigen::JacobiSVD<CMatrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix w = svd.matrixU() * svd.matrixV().leftCols(g).adjoint();  // G x T, W W^H = I
    return f * w;
}

double pareto_objective(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs, double rho,
                        const WaveformBlock& x) {
    return rho * (hc * x - c).squaredNorm() + (1.0 - rho) * (x - xs).squaredNorm();
}

namespace {

void check_ls_dims(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs, const char* who) {
    if (hc.rows() != c.rows() || hc.cols() != xs.rows() || c.cols() != xs.cols()) {
        throw std::domain_error(std::string(who) + ": dimension mismatch");
    }
}

}  // namespace

WaveformBlock solve_pareto_tradeoff(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs,
                                    TradeoffWeight rho, double total_energy) {
    check_ls_dims(hc, c, xs, "solve_pareto_tradeoff");
    if (!(total_energy > 0.0)) throw std::domain_error("solve_pareto_tradeoff: infeasible energy target");
    const double r = rho;
    const auto m = hc.cols();
    const CMatrix a = r * hc.adjoint() * hc + (1.0 - r) * CMatrix::Identity(m, m);
    const CMatrix b = r * hc.adjoint() * c + (1.0 - r) * xs;
    return solve_sphere_qp(a, b, total_energy).x;
}

IterativeWaveform solve_per_antenna(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs,
                                    TradeoffWeight rho, double per_antenna_energy) {
    check_ls_dims(hc, c, xs, "solve_per_antenna");
    if (!(per_antenna_energy > 0.0)) throw std::domain_error("solve_per_antenna: energy must be > 0");
    const double r = rho;
    const auto m = hc.cols();
    const auto t = xs.cols();
    const double row_norm = std::sqrt(per_antenna_energy);

    IterativeWaveform out;
    out.x = solve_pareto_tradeoff(hc, c, xs, rho, per_antenna_energy * static_cast<double>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const double n = out.x.row(i).norm();
        if (n > 0.0) {
            out.x.row(i) *= row_norm / n;
        } else {
            out.x.row(i).setConstant(row_norm / std::sqrt(static_cast<double>(t)));
        }
    }

    CMatrix residual = hc * out.x - c;
    const RVector col_energy = hc.colwise().squaredNorm().transpose();
    double f = r * residual.squaredNorm() + (1.0 - r) * (out.x - xs).squaredNorm();
    out.history.push_back(f);
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        for (Eigen::Index i = 0; i < m; ++i) {
            // Row i only enters through -2 Re <row, b>; its norm is fixed.
            Eigen::RowVectorXcd b = r * (col_energy(i) * out.x.row(i) - hc.col(i).adjoint() * residual) +
                                    (1.0 - r) * xs.row(i);
            const double bn = b.norm();
            if (bn == 0.0) continue;
            Eigen::RowVectorXcd next = b * (row_norm / bn);
            residual.noalias() += hc.col(i) * (next - out.x.row(i));
            out.x.row(i) = next;
        }
        residual = hc * out.x - c;
        const double nf = r * residual.squaredNorm() + (1.0 - r) * (out.x - xs).squaredNorm();
        out.history.push_back(nf);
        out.sweeps = sweep;
        const bool done = f - nf < kSweepTolerance;
        f = nf;
        if (done) return out;
    }
    throw ConvergenceError("solve_per_antenna: sweep cap reached", out.x, f, kMaxSweeps);
}

IterativeWaveform solve_constant_modulus(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs,
                                         TradeoffWeight rho, double modulus) {
    check_ls_dims(hc, c, xs, "solve_constant_modulus");
    if (!(modulus > 0.0)) throw std::domain_error("solve_constant_modulus: modulus must be > 0");
    const double r = rho;
    const auto m = hc.cols();
    const auto t = xs.cols();

    IterativeWaveform out;
    const CMatrix start =
        solve_pareto_tradeoff(hc, c, xs, rho, modulus * modulus * static_cast<double>(m * t));
    out.x.resize(m, t);
    for (Eigen::Index j = 0; j < t; ++j)
        for (Eigen::Index i = 0; i < m; ++i) out.x(i, j) = std::polar(modulus, std::arg(start(i, j)));

    CMatrix residual = hc * out.x - c;
    const RVector col_energy = hc.colwise().squaredNorm().transpose();
    double f = r * residual.squaredNorm() + (1.0 - r) * (out.x - xs).squaredNorm();
    out.history.push_back(f);
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        for (Eigen::Index j = 0; j < t; ++j) {
            for (Eigen::Index i = 0; i < m; ++i) {
                const cdouble b = r * (col_energy(i) * out.x(i, j) - hc.col(i).dot(residual.col(j))) +
                                  (1.0 - r) * xs(i, j);
                if (std::abs(b) == 0.0) continue;
                const cdouble next = std::polar(modulus, std::arg(b));
                residual.col(j) += hc.col(i) * (next - out.x(i, j));
                out.x(i, j) = next;
            }
        }
        residual = hc * out.x - c;
        const double nf = r * residual.squaredNorm() + (1.0 - r) * (out.x - xs).squaredNorm();
        out.history.push_back(nf);
        out.sweeps = sweep;
        const bool done = f - nf < kSweepTolerance;
        f = nf;
        if (done) return out;
    }
    throw ConvergenceError("solve_constant_modulus: sweep cap reached", out.x, f, kMaxSweeps);
}

}  // namespace isac
