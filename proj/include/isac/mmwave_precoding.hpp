// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/channel_model.hpp"
#include "isac/types.hpp"

#include <vector>

namespace isac {

/// Desired array responses G (D x I_s) toward the dictionary directions.
using DesiredResponse = CMatrix;

enum class PrecoderNormalization { UnitColumns, TotalTrace, None };

/// M x I precoder with its declared normalization.
struct Precoder {
    CMatrix matrix;
    PrecoderNormalization normalization = PrecoderNormalization::None;

    /// Rescale to the given normalization: unit-norm columns, or
    /// Tr(F^H F) <= column count.
    static Precoder normalized(CMatrix f, PrecoderNormalization mode);
    bool satisfies_normalization(double tol = 1e-10) const;
};

/// Scanning beam schedule: base precoder shifted by j * shift_step in
/// normalized angle for j = 0..intervals-1.
struct BeamSchedule {
    Precoder base;
    double shift_step = 0.0;
    int intervals = 1;
};

/// F_s = (A* A^T)^{-1} A* G with A the M x D transmit dictionary. Exact
/// zero forcing when D = M, the least-squares fit of A^T F = G otherwise.
Precoder zf_scanning_precoder(const SteeringDictionary& dict, const DesiredResponse& g);

inline constexpr double kMaxGramCondition = 1e12;

/// diag{sqrt(M) a(M, arcsin(j * delta / spacing))} * F.
Precoder shift_schedule(const Precoder& base, const ArrayGeometry& geom, double delta, int j);
std::vector<Precoder> expand_schedule(const BeamSchedule& schedule, const ArrayGeometry& geom);

/// |a(vartheta)^H f|^2 on every grid point of the dictionary. A beam
/// f = a(vartheta_0) peaks at vartheta_0.
RVector beampattern(const CVector& f, const SteeringDictionary& dict);

enum class SuperpositionMode { Plain, BetaOnSensing, BetaOnComm, SharedSymbol };

struct SuperpositionConfig {
    double rho = 0.5;
    CVector beta;      // diagonal of beta; empty means identity
    double phase = 0.0;  // shared-symbol phase phi
};

/// Plain:        x = sqrt(rho) Fc sc + sqrt(1-rho) Fs ss
/// BetaOnSensing: x = sqrt(rho) Fc sc + sqrt(1-rho) Fs beta ss
/// BetaOnComm:   x = sqrt(rho) Fc beta sc + sqrt(1-rho) Fs ss
/// SharedSymbol: x = [sqrt(rho) fc + sqrt(1-rho) e^{j phi} fs] sc   (single columns, scalar sc)
CVector compose_isac_signal(const SuperpositionConfig& cfg, const CMatrix& fc, const CMatrix& fs, const CVector& sc,
                            const CVector& ss, SuperpositionMode mode);

struct CoherentPhase {
    double phase = 0.0;
    bool relevant = true;  // false when the objective does not depend on phi
};

/// phi maximizing ||Hc (sqrt(rho) fc + sqrt(1-rho) e^{j phi} fs)||^2.
CoherentPhase optimize_coherent_phase(const ChannelMatrix& hc, const CVector& fc, const CVector& fs, double rho);
double coherent_gain(const ChannelMatrix& hc, const CVector& fc, const CVector& fs, double rho, double phase);

enum class BetaMode { Full, PhaseOnly };

/// SINR of the single communication stream when the sensing beams carry the
/// same symbol (x = [sqrt(rho) fc + sqrt(1-rho) Fs beta] s_c) and the user
/// applies the matched filter w = Hc g:
///   SINR(beta) = ||Hc (sqrt(rho) fc + sqrt(1-rho) Fs beta)||^2 / sigma^2.
double beta_sinr(const ChannelMatrix& hc, const CVector& fc, const CMatrix& fs, double rho, const CVector& beta,
                 const NoiseSpec& noise);

struct BetaResult {
    CVector beta;
    double sinr = 0.0;
    double start_sinr = 0.0;       // at beta = I
    std::vector<double> history;   // SINR per iteration, starting at beta = I
    bool converged = true;
};

inline constexpr int kMaxBetaSweeps = 10000;

/// Full: sum |beta_ii|^2 = I_s, solved globally as a sphere-constrained quadratic.
/// PhaseOnly: |beta_ii| = 1, cyclic closed-form phase updates.
BetaResult optimize_beta_sinr(const ChannelMatrix& hc, const CMatrix& fc, const CMatrix& fs, double rho,
                              BetaMode mode, const NoiseSpec& noise);

/// Y - channel_times_precoder * known (decision-directed cancellation).
CMatrix cancel_known_symbols(const CMatrix& y, const CMatrix& known, const CMatrix& channel_times_precoder);

}  // namespace isac
