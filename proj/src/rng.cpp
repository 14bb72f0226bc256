// SPDX-License-Identifier: Apache-2.0

#include "isac/rng.hpp"

#include <cmath>

namespace isac {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed + kGolden) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next_u64() {
    const std::uint64_t k = counter_++;
    return mix64(key_ + (k + 1) * kGolden);
}

double CounterRng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

int CounterRng::uniform_int(int n) {
    if (n <= 0) throw std::domain_error("uniform_int: n must be positive");
    const int v = static_cast<int>(uniform() * n);
    return v >= n ? n - 1 : v;
}

cdouble CounterRng::complex_gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u1) / sqrt(2)
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

CMatrix CounterRng::complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance) {
    CMatrix m(rows, cols);
    const double s = std::sqrt(variance);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = s * complex_gaussian();
    return m;
}

}  // namespace isac
