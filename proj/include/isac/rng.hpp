// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/types.hpp"

#include <cstdint>

namespace isac {

/// Counter-based random stream. Output k of stream s under seed x is a pure
/// function of (x, s, k), so trials can run on any thread in any order and
/// still see the same numbers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform on (0, 1].
    double uniform();
    /// Uniform integer in [0, n).
    int uniform_int(int n);
    double uniform_phase() { return 2.0 * kPi * uniform(); }

    /// Circularly-symmetric complex Gaussian, unit total variance (Box-Muller).
    cdouble complex_gaussian();
    CMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Seed for an independent sub-stream, e.g. one per Monte-Carlo trial.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace isac
