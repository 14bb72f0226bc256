// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isac {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cdouble kJ{0.0, 1.0};

/// Complex channel matrix, rows = receive elements, cols = transmit elements.
using ChannelMatrix = CMatrix;

/// Thrown when an iterative solver hits its iteration cap. Carries the best
/// iterate found so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, CMatrix best, double best_objective, int iterations)
        : std::runtime_error(what), best_(std::move(best)), best_objective_(best_objective),
          iterations_(iterations) {}

    const CMatrix& best_iterate() const noexcept { return best_; }
    double best_objective() const noexcept { return best_objective_; }
    int iterations() const noexcept { return iterations_; }

private:
    CMatrix best_;
    double best_objective_;
    int iterations_;
};

/// Total complex noise variance sigma^2 (sigma^2/2 per real dimension).
class NoiseSpec {
public:
    explicit NoiseSpec(double variance) : variance_(variance) {
        if (!(variance > 0.0)) throw std::domain_error("NoiseSpec: variance must be > 0");
    }
    double variance() const noexcept { return variance_; }

private:
    double variance_;
};

}  // namespace isac
