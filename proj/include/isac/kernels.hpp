// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version that produce bit-identical output for any thread count:
// parallel loops only split independent outputs, never a floating-point
// reduction.

namespace isac::kernels {

enum class DftSign {
    Forward,  // sum_n x[n] exp(-j 2 pi n k / L)
    Inverse,  // sum_n x[n] exp(+j 2 pi n k / L), no 1/L scaling
};

/// Random feasible points for the covariance-constrained design: X = F W
/// with W a random G x T matrix with orthonormal rows. Returns the smallest
/// ||Hc X - C||_F^2 seen over `count` draws of stream (seed, k).
struct RotationScan {
    const CMatrix* hc;
    const CMatrix* c;
    const CMatrix* factor;  // F with F F^H = T R_s
    std::uint64_t seed;
    int count;
};

/// Random G x T matrix with orthonormal rows from stream (seed, index).
CMatrix random_semi_unitary(int rows, int cols, std::uint64_t seed, std::uint64_t index);

namespace serial {
CMatrix dft_rows(const CMatrix& x, DftSign sign);
/// E(i, j) = sum_f |a_i^H R_f conj(b_j)|^2 * weight_j over frames f.
RMatrix correlation_energy(const std::vector<CMatrix>& frames, const CMatrix& rx_atoms, const CMatrix& tx_atoms,
                           const RVector& weights);
double min_rotation_objective(const RotationScan& scan);
}  // namespace serial

namespace parallel {
CMatrix dft_rows(const CMatrix& x, DftSign sign);
RMatrix correlation_energy(const std::vector<CMatrix>& frames, const CMatrix& rx_atoms, const CMatrix& tx_atoms,
                           const RVector& weights);
double min_rotation_objective(const RotationScan& scan);

/// Runs fn(i) for i in [0, n); fn must only write to slot i of its output.
void for_each_index(int n, const std::function<void(int)>& fn);
}  // namespace parallel

/// Sets the OpenMP thread count (n <= 0 leaves the runtime default).
void set_threads(int n);
int max_threads();

}  // namespace isac::kernels
