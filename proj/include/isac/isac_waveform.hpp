// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/comm_capacity.hpp"
#include "isac/sensing_capacity.hpp"
#include "isac/types.hpp"

#include <vector>

namespace isac {

/// Desired data symbols C, K x T.
using SymbolBlock = CMatrix;
/// Transmit block X_c, M x T.
using WaveformBlock = CMatrix;

class TradeoffWeight {
public:
    explicit TradeoffWeight(double rho);
    double value() const noexcept { return rho_; }
    operator double() const noexcept { return rho_; }

private:
    double rho_;
};

/// Per-transmission radar covariance R_s (M x M) and a factor F with
/// F F^H = R_s. F has rank(R_s) columns.
class RadarCovariance {
public:
    explicit RadarCovariance(CMatrix rs);
    /// R_s = X_s X_s^H / T, so that T R_s is the energy Gram of X_s.
    static RadarCovariance from_waveform(const CMatrix& xs, int t);

    const CMatrix& matrix() const noexcept { return rs_; }
    const CMatrix& factor() const noexcept { return factor_; }
    int rank() const noexcept { return static_cast<int>(factor_.cols()); }

private:
    CMatrix rs_;
    CMatrix factor_;
};

/// ||Hc Xc - C||_F^2
double interference_power(const WaveformBlock& xc, const ChannelMatrix& hc, const SymbolBlock& c);

/// Everything the weighted mutual-information objective needs besides Q and rho.
/// The normalizers are the single-objective optima C(H_c) and C(Q_h).
struct WeightedMiProblem {
    ChannelMatrix hc;
    ChannelCovariance qh;
    NoiseSpec noise;
    int t = 1;
    int ns = 1;
    double budget = 1.0;
    double comm_normalizer = 1.0;
    double sensing_normalizer = 1.0;
};

/// Builds the problem with normalizers from comm_capacity(hc, budget) and
/// sensing_capacity(qh, ns, t, budget).
WeightedMiProblem make_weighted_mi_problem(const ChannelMatrix& hc, const ChannelCovariance& qh,
                                           const NoiseSpec& noise, int t, int ns, double budget);

/// I_comm(Q) = log2 det(I + sigma^-2 Hc Q Hc^H)
double comm_information(const CMatrix& q, const WeightedMiProblem& p);
/// I_sens(Q) = (Ns/T) log2 det(I + sigma^-2 Q_h T Q), i.e. X^H X = T Q.
double sensing_information(const CMatrix& q, const WeightedMiProblem& p);

/// rho / C(Hc) * I_comm(Q) + (1 - rho) / C(Qh) * I_sens(Q)
double weighted_mi_objective(const TransmitCovariance& q, const WeightedMiProblem& p, TradeoffWeight rho);
/// Euclidean gradient of the objective with respect to Hermitian Q.
CMatrix weighted_mi_gradient(const CMatrix& q, const WeightedMiProblem& p, TradeoffWeight rho);

struct WeightedMiSolution {
    CMatrix q;
    double objective = 0.0;
    double stationarity = 0.0;  // ||Q - Proj(Q + grad)||_F
    int iterations = 0;
};

inline constexpr double kWeightedMiTolerance = 1e-7;
inline constexpr int kWeightedMiMaxIterations = 10000;

/// Projected gradient ascent over {Q PSD, Tr Q <= budget}.
WeightedMiSolution optimize_weighted_mi(const WeightedMiProblem& p, TradeoffWeight rho);

/// min ||Hc Xc - C||_F^2  s.t.  Xc Xc^H = T R_s, closed form via orthogonal Procrustes.
WaveformBlock solve_covariance_constrained(const ChannelMatrix& hc, const SymbolBlock& c, const RadarCovariance& rs,
                                           int t);

/// rho ||Hc X - C||^2 + (1 - rho) ||X - Xs||^2
double pareto_objective(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs, double rho,
                        const WaveformBlock& x);

/// min pareto_objective  s.t.  ||X||_F^2 = total_energy.
WaveformBlock solve_pareto_tradeoff(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs,
                                    TradeoffWeight rho, double total_energy);

struct IterativeWaveform {
    WaveformBlock x;
    std::vector<double> history;  // objective before the first sweep, then after each sweep
    int sweeps = 0;
};

inline constexpr double kSweepTolerance = 1e-10;
inline constexpr int kMaxSweeps = 100000;

/// Same objective with every row of X at squared norm per_antenna_energy.
/// Row-wise block coordinate descent from the row-rescaled Pareto solution.
IterativeWaveform solve_per_antenna(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs,
                                    TradeoffWeight rho, double per_antenna_energy);

/// Same objective with |X(i, j)| = modulus for every entry. Cyclic
/// coordinate descent over entry phases.
IterativeWaveform solve_constant_modulus(const ChannelMatrix& hc, const SymbolBlock& c, const CMatrix& xs,
                                         TradeoffWeight rho, double modulus);

}  // namespace isac
