// SPDX-License-Identifier: Apache-2.0

#include "isac/isac_waveform.hpp"
#include "isac/kernels.hpp"
#include "isac/linalg.hpp"
#include "isac/sphere_qp.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace isac;
using isac::testkit::max_abs;

namespace {

struct LsInstance {
    CMatrix hc, c, xs;
};

LsInstance random_ls(int k, int m, int t, CounterRng& rng, double xs_energy) {
    LsInstance in{rng.complex_gaussian_matrix(k, m), rng.complex_gaussian_matrix(k, t), rng.complex_gaussian_matrix(m, t)};
    in.xs *= std::sqrt(xs_energy) / in.xs.norm();
    return in;
}

/// Best Pareto objective from several sphere-descent starts.
double pareto_oracle(const LsInstance& in, double rho, double energy, CounterRng& rng) {
    const auto m = in.hc.cols();
    const CMatrix a = rho * in.hc.adjoint() * in.hc + (1.0 - rho) * CMatrix::Identity(m, m);
    const CMatrix b = rho * in.hc.adjoint() * in.c + (1.0 - rho) * in.xs;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 4; ++s) {
        CMatrix x0 = s == 0 ? CMatrix(in.xs) : rng.complex_gaussian_matrix(m, in.xs.cols());
        if (x0.norm() == 0.0) x0 = CMatrix::Ones(m, in.xs.cols());
        const CMatrix x = oracle::sphere_descent(a, b, energy, x0, 200000, 1e-9);
        best = std::min(best, pareto_objective(in.hc, in.c, in.xs, rho, x));
    }
    return best;
}

WeightedMiProblem toy_problem(int m, CounterRng& rng, double budget = 2.0) {
    const CMatrix hc = rng.complex_gaussian_matrix(2, m);
    const ChannelCovariance qh(testkit::random_psd(m, rng));
    return make_weighted_mi_problem(hc, qh, NoiseSpec(1.0), 4, 2, budget);
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(InterferencePower, Basics) {
    CounterRng rng(1);
    const CMatrix hc = rng.complex_gaussian_matrix(2, 3);
    const CMatrix x = rng.complex_gaussian_matrix(3, 4);
    EXPECT_NEAR(interference_power(x, hc, hc * x), 0.0, 1e-20);
    const CMatrix c = rng.complex_gaussian_matrix(2, 4);
    EXPECT_NEAR(interference_power(CMatrix::Zero(3, 4), hc, c), c.squaredNorm(), 1e-14);
    double acc = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) {
            cdouble s = -c(i, j);
            for (int k = 0; k < 3; ++k) s += hc(i, k) * x(k, j);
            acc += std::norm(s);
        }
    EXPECT_NEAR(interference_power(x, hc, c), acc, 1e-12);
    EXPECT_THROW(interference_power(x, hc, CMatrix::Zero(3, 4)), std::domain_error);
}

TEST(TradeoffWeight, Range) {
    EXPECT_THROW(TradeoffWeight(-0.1), std::domain_error);
    EXPECT_THROW(TradeoffWeight(1.1), std::domain_error);
    EXPECT_DOUBLE_EQ(TradeoffWeight(0.3).value(), 0.3);
}

// ---------------------------------------------------------------------------

TEST(WeightedMi, EndpointsSelfNormalize) {
    CounterRng rng(2);
    const auto p = toy_problem(3, rng);
    const auto comm = comm_capacity(p.hc, p.budget, p.noise);
    EXPECT_NEAR(weighted_mi_objective(TransmitCovariance(comm.covariance), p, TradeoffWeight(1.0)), 1.0, 1e-12);
    const auto sw = optimal_sensing_waveform(p.qh, p.t, p.budget, p.noise);
    const CMatrix qs = linalg::hermitian_part(sw.block.adjoint() * sw.block) / p.t;
    EXPECT_NEAR(weighted_mi_objective(TransmitCovariance(qs), p, TradeoffWeight(0.0)), 1.0, 1e-12);
}

TEST(WeightedMi, CompositionalOracle) {
    CounterRng rng(3);
    const auto p = toy_problem(3, rng);
    const CMatrix q = testkit::random_psd_trace(3, 1.5, rng);
    const double comm = mutual_information_comm(p.hc, TransmitCovariance(q), p.noise);
    // X with X^H X = T Q.
    const CMatrix x = std::sqrt(static_cast<double>(p.t)) * CMatrix(CMatrix::Identity(p.t, 3)) * linalg::psd_sqrt(q);
    const double sens = estimation_rate(x, p.qh, p.noise, p.ns, p.t);
    EXPECT_NEAR(weighted_mi_objective(TransmitCovariance(q), p, TradeoffWeight(0.5)),
                0.5 * comm / p.comm_normalizer + 0.5 * sens / p.sensing_normalizer, 1e-12);
}

TEST(WeightedMi, ZeroNormalizerRejected) {
    CounterRng rng(4);
    auto p = toy_problem(2, rng);
    p.sensing_normalizer = 0.0;
    EXPECT_THROW(weighted_mi_objective(TransmitCovariance(CMatrix::Identity(2, 2)), p, TradeoffWeight(0.5)),
                 std::domain_error);
}

TEST(WeightedMi, GradientMatchesFiniteDifferences) {
    CounterRng rng(5);
    const auto p = toy_problem(3, rng);
    const CMatrix q = testkit::random_psd_trace(3, 1.0, rng) + 0.1 * CMatrix::Identity(3, 3);
    const CMatrix g = weighted_mi_gradient(q, p, TradeoffWeight(0.4));
    for (int trial = 0; trial < 5; ++trial) {
        CMatrix d = rng.complex_gaussian_matrix(3, 3);
        d = linalg::hermitian_part(d);
        const double h = 1e-6;
        const double fd = (weighted_mi_objective(TransmitCovariance(q + h * d), p, TradeoffWeight(0.4)) -
                           weighted_mi_objective(TransmitCovariance(q - h * d), p, TradeoffWeight(0.4))) / (2 * h);
        EXPECT_NEAR((g.adjoint() * d).trace().real(), fd, 1e-6);
    }
}

TEST(WeightedMi, ConcaveAlongRandomSegments) {
    CounterRng rng(6);
    const auto p = toy_problem(3, rng);
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix q1 = testkit::random_psd_trace(3, 2.0 * rng.uniform(), rng);
        const CMatrix q2 = testkit::random_psd_trace(3, 2.0 * rng.uniform(), rng);
        const TradeoffWeight rho(rng.uniform());
        const double mid = weighted_mi_objective(TransmitCovariance(0.5 * (q1 + q2)), p, rho);
        const double chord = 0.5 * (weighted_mi_objective(TransmitCovariance(q1), p, rho) +
                                    weighted_mi_objective(TransmitCovariance(q2), p, rho));
        EXPECT_GE(mid, chord - 1e-9);
    }
}

TEST(OptimizeWeightedMi, EndpointsReachSingleObjectiveOptima) {
    CounterRng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = toy_problem(2 + trial % 3, rng);
        for (double rho : {0.0, 1.0}) {
            const auto sol = optimize_weighted_mi(p, TradeoffWeight(rho));
            EXPECT_NEAR(sol.objective, 1.0, 1e-6);
            EXPECT_LT(sol.stationarity, 1e-6);
        }
    }
}

TEST(OptimizeWeightedMi, FeasibleAndStationary) {
    CounterRng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = toy_problem(2 + trial % 3, rng, 0.5 + 3.0 * rng.uniform());
        const TradeoffWeight rho(rng.uniform());
        const auto sol = optimize_weighted_mi(p, rho);
        EXPECT_TRUE(linalg::is_psd(sol.q, 1e-10));
        EXPECT_LE(sol.q.trace().real(), p.budget + 1e-9);
        EXPECT_LT(sol.stationarity, 1e-6);
        EXPECT_NEAR(sol.objective, weighted_mi_objective(TransmitCovariance(sol.q), p, rho), 1e-12);
        for (int k = 0; k < 200; ++k) {
            const CMatrix q = testkit::random_psd_trace(p.qh.dimension(), p.budget * rng.uniform(), rng);
            EXPECT_LE(weighted_mi_objective(TransmitCovariance(q), p, rho), sol.objective + 1e-9);
        }
    }
}

TEST(OptimizeWeightedMi, MatchesGridOnTwoByTwo) {
    CounterRng rng(9);
    const auto p = toy_problem(2, rng, 2.0);
    const TradeoffWeight rho(0.5);
    const auto sol = optimize_weighted_mi(p, rho);

    const auto comm = comm_capacity(p.hc, p.budget, p.noise);
    const auto sw = optimal_sensing_waveform(p.qh, p.t, p.budget, p.noise);
    const CMatrix qs = linalg::hermitian_part(sw.block.adjoint() * sw.block) / p.t;
    EXPECT_GE(sol.objective, weighted_mi_objective(TransmitCovariance(comm.covariance), p, rho) - 1e-12);
    EXPECT_GE(sol.objective, weighted_mi_objective(TransmitCovariance(qs), p, rho) - 1e-12);

    // Trace-P boundary of the 2x2 PSD cone: [[a, z], [z*, P - a]], |z|^2 <= a (P - a).
    double grid_best = -1.0;
    const int na = 120, nr = 60, nphi = 120;
    for (int ia = 0; ia <= na; ++ia) {
        const double a = p.budget * ia / na;
        const double rmax = std::sqrt(std::max(0.0, a * (p.budget - a)));
        for (int ir = 0; ir <= nr; ++ir) {
            for (int ip = 0; ip < (ir == 0 ? 1 : nphi); ++ip) {
                const cdouble z = std::polar(rmax * ir / nr, 2.0 * kPi * ip / nphi);
                CMatrix q(2, 2);
                q << a, z, std::conj(z), p.budget - a;
                grid_best = std::max(grid_best, weighted_mi_objective(TransmitCovariance(q), p, rho));
            }
        }
    }
    EXPECT_GE(sol.objective, grid_best - 1e-9);
    EXPECT_NEAR(sol.objective, grid_best, 1e-3);
}

// ---------------------------------------------------------------------------

TEST(CovarianceConstrained, FeasibleTargetAttained) {
    CounterRng rng(10);
    const int m = 3, t = 4;
    const CMatrix c = testkit::random_unitary(t, rng).topRows(m) * 2.0;  // M x T, C C^H = 4 I
    const RadarCovariance rs(c * c.adjoint() / static_cast<double>(t));
    const CMatrix x = solve_covariance_constrained(CMatrix::Identity(m, m), c, rs, t);
    EXPECT_LT(max_abs(x - c), 1e-10);
    EXPECT_LT(interference_power(x, CMatrix::Identity(m, m), c), 1e-18);
}

TEST(CovarianceConstrained, ConstraintExactAndBeatsRandomRotations) {
    CounterRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + rng.uniform_int(4), k = 1 + rng.uniform_int(m), t = m + rng.uniform_int(3);
        const CMatrix hc = rng.complex_gaussian_matrix(k, m);
        const CMatrix c = rng.complex_gaussian_matrix(k, t);
        const CMatrix xs = rng.complex_gaussian_matrix(m, t);
        const auto rs = RadarCovariance::from_waveform(xs, t);
        const CMatrix x = solve_covariance_constrained(hc, c, rs, t);
        EXPECT_LT((x * x.adjoint() - t * rs.matrix()).norm(), 1e-8);
        const CMatrix factor = rs.factor() * std::sqrt(static_cast<double>(t));
        const kernels::RotationScan scan{&hc, &c, &factor, static_cast<std::uint64_t>(trial), 5000};
        EXPECT_LE(interference_power(x, hc, c), kernels::parallel::min_rotation_objective(scan) + 1e-9);
    }
}

TEST(CovarianceConstrained, RankDeficientRadarCovariance) {
    CounterRng rng(12);
    const int m = 4, t = 5;
    const CMatrix xs = rng.complex_gaussian_matrix(m, 2) * rng.complex_gaussian_matrix(2, t);
    const auto rs = RadarCovariance::from_waveform(xs, t);
    EXPECT_EQ(rs.rank(), 2);
    const CMatrix hc = rng.complex_gaussian_matrix(2, m);
    const CMatrix c = rng.complex_gaussian_matrix(2, t);
    const CMatrix x = solve_covariance_constrained(hc, c, rs, t);
    EXPECT_EQ(x.rows(), m);
    EXPECT_LT((x * x.adjoint() - t * rs.matrix()).norm(), 1e-8);
    Eigen::JacobiSVD<CMatrix> svd(x);
    EXPECT_LT(svd.singularValues()(2), 1e-8);
}

TEST(CovarianceConstrained, Errors) {
    EXPECT_THROW(RadarCovariance(-CMatrix::Identity(2, 2)), std::domain_error);
    const RadarCovariance zero(CMatrix::Zero(2, 2));
    EXPECT_THROW(solve_covariance_constrained(CMatrix::Identity(2, 2), CMatrix::Zero(2, 3), zero, 3), std::domain_error);
    const RadarCovariance full(CMatrix::Identity(3, 3));
    EXPECT_THROW(solve_covariance_constrained(CMatrix::Identity(3, 3), CMatrix::Zero(3, 2), full, 2), std::domain_error);
    EXPECT_THROW(solve_covariance_constrained(CMatrix::Identity(2, 2), CMatrix::Zero(2, 3), full, 3), std::domain_error);
}

// ---------------------------------------------------------------------------

TEST(SphereQp, StationarityAndEnergy) {
    CounterRng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + rng.uniform_int(5), k = 1 + rng.uniform_int(4);
        CMatrix a = linalg::hermitian_part(rng.complex_gaussian_matrix(n, n));
        const CMatrix b = rng.complex_gaussian_matrix(n, k);
        const double e = 0.1 + 5.0 * rng.uniform();
        const auto sol = solve_sphere_qp(a, b, e);
        EXPECT_NEAR(sol.x.squaredNorm(), e, 1e-8 * e);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
        EXPECT_GE(sol.lambda, -es.eigenvalues()(0) - 1e-9);
        EXPECT_LT(max_abs((a + sol.lambda * CMatrix::Identity(n, n)) * sol.x - b), 1e-7 * (1.0 + max_abs(b)));
        const CMatrix ref = oracle::sphere_descent(a, b, e, rng.complex_gaussian_matrix(n, k), 200000, 1e-9);
        EXPECT_LE(sphere_qp_objective(a, b, sol.x), sphere_qp_objective(a, b, ref) + 1e-8);
    }
}

TEST(SphereQp, HardCase) {
    // b orthogonal to the smallest eigenvector: the minimizer needs a component along it.
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = -1.0;
    a(1, 1) = 1.0;
    CMatrix b = CMatrix::Zero(2, 1);
    b(1, 0) = 0.5;
    const auto sol = solve_sphere_qp(a, b, 4.0);
    EXPECT_TRUE(sol.hard_case);
    EXPECT_NEAR(sol.lambda, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(sol.x(1, 0)), 0.25, 1e-12);
    EXPECT_NEAR(sol.x.squaredNorm(), 4.0, 1e-12);
    EXPECT_NEAR(sphere_qp_objective(a, b, sol.x), -4.0 + 2.0 * 0.0625 - 2.0 * 0.125, 1e-12);
}

TEST(Pareto, RhoZeroReturnsReference) {
    CounterRng rng(14);
    const auto in = random_ls(2, 3, 4, rng, 6.0);
    const CMatrix x = solve_pareto_tradeoff(in.hc, in.c, in.xs, TradeoffWeight(0.0), 6.0);
    EXPECT_LT(max_abs(x - in.xs), 1e-8);
}

TEST(Pareto, RhoOneEnergyMatchedLeastSquares) {
    CounterRng rng(15);
    const CMatrix hc = rng.complex_gaussian_matrix(3, 3);
    const CMatrix c = rng.complex_gaussian_matrix(3, 2);
    const CMatrix ls = hc.fullPivLu().solve(c);
    const double e = ls.squaredNorm();
    const CMatrix x = solve_pareto_tradeoff(hc, c, CMatrix::Zero(3, 2), TradeoffWeight(1.0), e);
    EXPECT_LT(max_abs(x - ls), 1e-8);
}

TEST(Pareto, EnergyAndLagrangianStationarity) {
    CounterRng rng(16);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + rng.uniform_int(4), k = 1 + rng.uniform_int(m), t = 1 + rng.uniform_int(5);
        const auto in = random_ls(k, m, t, rng, 1.0 + rng.uniform());
        const double rho = rng.uniform(), e = 0.5 + 4.0 * rng.uniform();
        const CMatrix x = solve_pareto_tradeoff(in.hc, in.c, in.xs, TradeoffWeight(rho), e);
        EXPECT_NEAR(x.squaredNorm(), e, 1e-8);
        // (A + lambda I) X = B for a scalar lambda.
        const CMatrix a = rho * in.hc.adjoint() * in.hc + (1.0 - rho) * CMatrix::Identity(m, m);
        const CMatrix b = rho * in.hc.adjoint() * in.c + (1.0 - rho) * in.xs;
        const CMatrix r = b - a * x;
        const cdouble lambda = x.cwiseProduct(r.conjugate()).sum() / e;  // <r, x> / ||x||^2
        EXPECT_LT(max_abs(r - std::conj(lambda) * x), 1e-7 * (1.0 + max_abs(b)));
    }
}

TEST(Pareto, MatchesProjectedGradientOracle) {
    CounterRng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto in = random_ls(2, 2, 2, rng, 2.0);
        const double e = 2.0 + rng.uniform();
        const CMatrix x = solve_pareto_tradeoff(in.hc, in.c, in.xs, TradeoffWeight(0.5), e);
        EXPECT_NEAR(pareto_objective(in.hc, in.c, in.xs, 0.5, x), pareto_oracle(in, 0.5, e, rng), 1e-6);
    }
}

TEST(Pareto, MonotoneInRho) {
    CounterRng rng(18);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + rng.uniform_int(3), k = 1 + rng.uniform_int(m), t = 2 + rng.uniform_int(4);
        const auto in = random_ls(k, m, t, rng, t * 1.0);
        double prev_comm = std::numeric_limits<double>::infinity(), prev_dist = -1.0;
        for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const CMatrix x = solve_pareto_tradeoff(in.hc, in.c, in.xs, TradeoffWeight(rho), t * 1.0);
            const double comm = interference_power(x, in.hc, in.c), dist = (x - in.xs).squaredNorm();
            EXPECT_LE(comm, prev_comm + 1e-9);
            EXPECT_GE(dist, prev_dist - 1e-9);
            prev_comm = comm;
            prev_dist = dist;
        }
    }
}

TEST(Pareto, Errors) {
    EXPECT_THROW(solve_pareto_tradeoff(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                       TradeoffWeight(0.5), 0.0),
                 std::domain_error);
    EXPECT_THROW(solve_pareto_tradeoff(CMatrix::Identity(2, 2), CMatrix::Zero(2, 3), CMatrix::Zero(2, 2),
                                       TradeoffWeight(0.5), 1.0),
                 std::domain_error);
}

// ---------------------------------------------------------------------------

TEST(PerAntenna, RowUniformReferenceIsFixedPoint) {
    CounterRng rng(19);
    CMatrix xs = rng.complex_gaussian_matrix(3, 4);
    for (int i = 0; i < 3; ++i) xs.row(i) *= std::sqrt(2.0) / xs.row(i).norm();
    const CMatrix hc = rng.complex_gaussian_matrix(2, 3);
    const auto out = solve_per_antenna(hc, rng.complex_gaussian_matrix(2, 4), xs, TradeoffWeight(0.0), 2.0);
    EXPECT_LT(max_abs(out.x - xs), 1e-8);
}

TEST(PerAntenna, RowNormsMonotoneAndBeatsInitialization) {
    CounterRng rng(20);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + rng.uniform_int(3), k = 1 + rng.uniform_int(m), t = 2 + rng.uniform_int(4);
        const auto in = random_ls(k, m, t, rng, t * 1.0);
        const double rho = rng.uniform(), e = t * 1.0 / m;
        const auto out = solve_per_antenna(in.hc, in.c, in.xs, TradeoffWeight(rho), e);
        for (int i = 0; i < m; ++i) EXPECT_NEAR(out.x.row(i).squaredNorm(), e, 1e-8);
        for (std::size_t s = 1; s < out.history.size(); ++s) EXPECT_LE(out.history[s], out.history[s - 1] + 1e-12);
        EXPECT_NEAR(out.history.back(), pareto_objective(in.hc, in.c, in.xs, rho, out.x), 1e-9);
        EXPECT_LE(out.history.back(), out.history.front() + 1e-12);
    }
}

TEST(PerAntenna, NearGridOracleOnTwoByTwo) {
    CounterRng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const auto in = random_ls(2, 2, 2, rng, 2.0);
        const double rho = 0.5, e = 1.0;
        const auto out = solve_per_antenna(in.hc, in.c, in.xs, TradeoffWeight(rho), e);
        // Row i = sqrt(e) [cos(a) e^{j p}, sin(a) e^{j q}]; coarse grid then compass polish.
        auto build = [&](const std::vector<double>& v) {
            CMatrix x(2, 2);
            for (int i = 0; i < 2; ++i) {
                x(i, 0) = std::polar(std::sqrt(e) * std::cos(v[3 * i]), v[3 * i + 1]);
                x(i, 1) = std::polar(std::sqrt(e) * std::sin(v[3 * i]), v[3 * i + 2]);
            }
            return x;
        };
        auto f = [&](const std::vector<double>& v) { return pareto_objective(in.hc, in.c, in.xs, rho, build(v)); };
        const int na = 8, np = 12;
        std::vector<double> best_v(6);
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> v(6);
        for (int a0 = 0; a0 <= na; ++a0)
            for (int p0 = 0; p0 < np; ++p0)
                for (int q0 = 0; q0 < np; ++q0)
                    for (int a1 = 0; a1 <= na; ++a1)
                        for (int p1 = 0; p1 < np; ++p1)
                            for (int q1 = 0; q1 < np; ++q1) {
                                v = {kPi / 2 * a0 / na, 2 * kPi * p0 / np, 2 * kPi * q0 / np,
                                     kPi / 2 * a1 / na, 2 * kPi * p1 / np, 2 * kPi * q1 / np};
                                const double fv = f(v);
                                if (fv < best) {
                                    best = fv;
                                    best_v = v;
                                }
                            }
        best = f(oracle::compass_minimize(f, best_v, 0.2));
        EXPECT_LE(out.history.back(), best + 1e-3);
    }
}

// ---------------------------------------------------------------------------

TEST(ConstantModulus, ConstantModulusReferenceIsFixedPoint) {
    CounterRng rng(22);
    CMatrix xs(2, 3);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 2; ++i) xs(i, j) = std::polar(0.7, rng.uniform_phase());
    const auto out = solve_constant_modulus(rng.complex_gaussian_matrix(2, 2), rng.complex_gaussian_matrix(2, 3), xs,
                                            TradeoffWeight(0.0), 0.7);
    EXPECT_LT(max_abs(out.x - xs), 1e-8);
}

TEST(ConstantModulus, ExactModulusAndMonotone) {
    CounterRng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + rng.uniform_int(3), k = 1 + rng.uniform_int(m), t = 2 + rng.uniform_int(4);
        const auto in = random_ls(k, m, t, rng, t * 1.0);
        const double mod = std::sqrt(1.0 / m);
        const auto out = solve_constant_modulus(in.hc, in.c, in.xs, TradeoffWeight(rng.uniform()), mod);
        for (int j = 0; j < t; ++j)
            for (int i = 0; i < m; ++i) EXPECT_NEAR(std::abs(out.x(i, j)), mod, 1e-15);
        for (std::size_t s = 1; s < out.history.size(); ++s) EXPECT_LE(out.history[s], out.history[s - 1] + 1e-12);
    }
}

TEST(ConstantModulus, NearPhaseGridOracleOnTwoByTwo) {
    CounterRng rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const auto in = random_ls(2, 2, 2, rng, 2.0);
        const double rho = rng.uniform(), mod = std::sqrt(0.5);
        const auto out = solve_constant_modulus(in.hc, in.c, in.xs, TradeoffWeight(rho), mod);
        // Columns decouple: grid each column's two phases, then polish.
        double oracle_total = 0.0;
        for (int j = 0; j < 2; ++j) {
            auto f = [&](const std::vector<double>& v) {
                CVector x(2);
                x << std::polar(mod, v[0]), std::polar(mod, v[1]);
                return rho * (in.hc * x - in.c.col(j)).squaredNorm() + (1.0 - rho) * (x - in.xs.col(j)).squaredNorm();
            };
            const int n = 360;
            std::vector<double> best_v{0.0, 0.0};
            double best = f(best_v);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    std::vector<double> v{2 * kPi * a / n, 2 * kPi * b / n};
                    if (f(v) < best) {
                        best = f(v);
                        best_v = v;
                    }
                }
            oracle_total += f(oracle::compass_minimize(f, best_v, 2 * kPi / n));
        }
        EXPECT_LE(out.history.back(), oracle_total + 1e-3);
        EXPECT_GE(out.history.back(), oracle_total - 1e-6);
    }
}
