// SPDX-License-Identifier: Apache-2.0

#include "isac/mmwave_precoding.hpp"

#include "isac/linalg.hpp"
#include "isac/sphere_qp.hpp"

#include <cmath>

namespace isac {

Precoder Precoder::normalized(CMatrix f, PrecoderNormalization mode) {
    Precoder p{std::move(f), mode};
    if (mode == PrecoderNormalization::UnitColumns) {
        for (Eigen::Index c = 0; c < p.matrix.cols(); ++c) {
            const double n = p.matrix.col(c).norm();
            if (n == 0.0) throw std::domain_error("Precoder: cannot unit-normalize a zero column");
            p.matrix.col(c) /= n;
        }
    } else if (mode == PrecoderNormalization::TotalTrace) {
        const double tr = p.matrix.squaredNorm();
        const auto limit = static_cast<double>(p.matrix.cols());
        if (tr > limit) p.matrix *= std::sqrt(limit / tr);
    }
    return p;
}

bool Precoder::satisfies_normalization(double tol) const {
    switch (normalization) {
        case PrecoderNormalization::UnitColumns:
            for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                if (std::abs(matrix.col(c).norm() - 1.0) > tol) return false;
            }
            return true;
        case PrecoderNormalization::TotalTrace:
            return matrix.squaredNorm() <= static_cast<double>(matrix.cols()) + tol;
        case PrecoderNormalization::None:
            return true;
    }
    return true;
}

Precoder zf_scanning_precoder(const SteeringDictionary& dict, const DesiredResponse& g) {
    const CMatrix& a = dict.matrix;  // M x D
    if (g.rows() != a.cols()) throw std::domain_error("zf_scanning_precoder: G must have D rows");
    if (a.cols() < a.rows()) throw std::domain_error("zf_scanning_precoder: D must be >= M");
    const CMatrix gram = a.conjugate() * a.transpose();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(gram), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
        throw std::domain_error("zf_scanning_precoder: dictionary Gram matrix is ill-conditioned; regularize");
    }
    return Precoder{gram.ldlt().solve(a.conjugate() * g), PrecoderNormalization::None};
}

Precoder shift_schedule(const Precoder& base, const ArrayGeometry& geom, double delta, int j) {
    if (base.matrix.rows() != geom.elements) throw std::domain_error("shift_schedule: precoder/array size mismatch");
    const double s = j * delta / geom.spacing;
    if (!(std::abs(s) <= 1.0)) throw std::domain_error("shift_schedule: arcsin argument outside [-1, 1]");
    const CVector mapping = std::sqrt(static_cast<double>(geom.elements)) * steering_vector(geom, std::asin(s));
    return Precoder{mapping.asDiagonal() * base.matrix, base.normalization};
}

std::vector<Precoder> expand_schedule(const BeamSchedule& schedule, const ArrayGeometry& geom) {
    if (schedule.intervals < 1) throw std::domain_error("expand_schedule: need at least one interval");
    std::vector<Precoder> out;
    out.reserve(static_cast<std::size_t>(schedule.intervals));
    for (int j = 0; j < schedule.intervals; ++j) out.push_back(shift_schedule(schedule.base, geom, schedule.shift_step, j));
    return out;
}

RVector beampattern(const CVector& f, const SteeringDictionary& dict) {
    if (f.size() != dict.matrix.rows()) throw std::domain_error("beampattern: size mismatch");
    return (dict.matrix.adjoint() * f).cwiseAbs2();
}

CVector compose_isac_signal(const SuperpositionConfig& cfg, const CMatrix& fc, const CMatrix& fs, const CVector& sc,
                            const CVector& ss, SuperpositionMode mode) {
    if (!(cfg.rho >= 0.0 && cfg.rho <= 1.0)) throw std::domain_error("compose_isac_signal: rho outside [0, 1]");
    if (fc.rows() != fs.rows()) throw std::domain_error("compose_isac_signal: precoders disagree on M");
    const double wc = std::sqrt(cfg.rho);
    const double ws = std::sqrt(1.0 - cfg.rho);

    auto beta_or_identity = [&](Eigen::Index len) -> CVector {
        if (cfg.beta.size() == 0) return CVector::Ones(len);
        if (cfg.beta.size() != len) throw std::domain_error("compose_isac_signal: beta length does not match mode");
        return cfg.beta;
    };

    if (mode == SuperpositionMode::SharedSymbol) {
        if (fc.cols() != 1 || fs.cols() != 1 || sc.size() != 1) {
            throw std::domain_error("compose_isac_signal: shared-symbol mode takes single beams and one symbol");
        }
        return (wc * fc.col(0) + ws * std::polar(1.0, cfg.phase) * fs.col(0)) * sc(0);
    }
    if (fc.cols() != sc.size() || fs.cols() != ss.size()) {
        throw std::domain_error("compose_isac_signal: precoder/symbol size mismatch");
    }
    switch (mode) {
        case SuperpositionMode::Plain:
            if (cfg.beta.size() != 0) throw std::domain_error("compose_isac_signal: plain mode takes no beta");
            return wc * fc * sc + ws * fs * ss;
        case SuperpositionMode::BetaOnSensing:
            return wc * fc * sc + ws * fs * beta_or_identity(fs.cols()).asDiagonal() * ss;
        case SuperpositionMode::BetaOnComm:
            return wc * fc * beta_or_identity(fc.cols()).asDiagonal() * sc + ws * fs * ss;
        case SuperpositionMode::SharedSymbol:
            break;
    }
    throw std::domain_error("compose_isac_signal: unknown mode");
}

double coherent_gain(const ChannelMatrix& hc, const CVector& fc, const CVector& fs, double rho, double phase) {
    return (hc * (std::sqrt(rho) * fc + std::sqrt(1.0 - rho) * std::polar(1.0, phase) * fs)).squaredNorm();
}

CoherentPhase optimize_coherent_phase(const ChannelMatrix& hc, const CVector& fc, const CVector& fs, double rho) {
    if (hc.cols() != fc.size() || fc.size() != fs.size()) throw std::domain_error("optimize_coherent_phase: size mismatch");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("optimize_coherent_phase: rho outside [0, 1]");
    if (hc.cwiseAbs().maxCoeff() == 0.0) throw std::domain_error("optimize_coherent_phase: zero channel");
    const CVector uc = hc * fc;
    const CVector us = hc * fs;
    // ||.||^2 = A + 2 sqrt(rho (1-rho)) Re(e^{j phi} z),  z = uc^H us
    const cdouble z = uc.dot(us);
    if (rho == 0.0 || rho == 1.0 || us.squaredNorm() == 0.0 || std::abs(z) == 0.0) return {0.0, false};
    return {-std::arg(z), true};
}

double beta_sinr(const ChannelMatrix& hc, const CVector& fc, const CMatrix& fs, double rho, const CVector& beta,
                 const NoiseSpec& noise) {
    return (hc * (std::sqrt(rho) * fc + std::sqrt(1.0 - rho) * fs * beta)).squaredNorm() / noise.variance();
}

BetaResult optimize_beta_sinr(const ChannelMatrix& hc, const CMatrix& fc, const CMatrix& fs, double rho,
                              BetaMode mode, const NoiseSpec& noise) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("optimize_beta_sinr: rho must lie in (0, 1)");
    if (fc.cols() != 1) throw std::domain_error("optimize_beta_sinr: one communication stream expected");
    if (hc.cols() != fc.rows() || fc.rows() != fs.rows()) throw std::domain_error("optimize_beta_sinr: size mismatch");
    const auto streams = fs.cols();
    const CVector a = std::sqrt(rho) * hc * fc.col(0);
    const CMatrix b = std::sqrt(1.0 - rho) * hc * fs;
    const double s2 = noise.variance();
    auto sinr_of = [&](const CVector& beta) { return (a + b * beta).squaredNorm() / s2; };

    BetaResult out;
    out.beta = CVector::Ones(streams);
    out.start_sinr = sinr_of(out.beta);
    out.sinr = out.start_sinr;
    out.history.push_back(out.sinr);

    if (mode == BetaMode::Full) {
        // max ||a + B beta||^2 on ||beta||^2 = I_s  <=>  min beta^H (-B^H B) beta - 2 Re beta^H (B^H a)
        const CMatrix q = -(b.adjoint() * b);
        const CMatrix lin = b.adjoint() * a;
        const CVector beta = solve_sphere_qp(q, lin, static_cast<double>(streams)).x.col(0);
        const double sinr = sinr_of(beta);
        if (sinr >= out.sinr) {
            out.beta = beta;
            out.sinr = sinr;
        }
        out.history.push_back(out.sinr);
        return out;
    }

    CVector sum = a + b * out.beta;
    for (int sweep = 0; sweep < kMaxBetaSweeps; ++sweep) {
        for (Eigen::Index i = 0; i < streams; ++i) {
            const CVector rest = sum - b.col(i) * out.beta(i);
            const cdouble cross = b.col(i).dot(rest);  // b_i^H r
            if (std::abs(cross) == 0.0) continue;
            out.beta(i) = std::polar(1.0, std::arg(cross));
            sum = rest + b.col(i) * out.beta(i);
        }
        const double sinr = sinr_of(out.beta);
        const double gain = sinr - out.sinr;
        out.sinr = std::max(out.sinr, sinr);
        out.history.push_back(out.sinr);
        if (gain <= 1e-12 * std::max(1.0, out.sinr)) return out;
    }
    out.converged = false;
    return out;
}

CMatrix cancel_known_symbols(const CMatrix& y, const CMatrix& known, const CMatrix& channel_times_precoder) {
    if (channel_times_precoder.rows() != y.rows() || channel_times_precoder.cols() != known.rows() ||
        known.cols() != y.cols()) {
        throw std::domain_error("cancel_known_symbols: dimension mismatch");
    }
    return y - channel_times_precoder * known;
}

}  // namespace isac
