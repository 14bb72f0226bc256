// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/types.hpp"

namespace isac {

/// Global minimizer of  tr(X^H A X) - 2 Re tr(X^H B)  subject to ||X||_F^2 = energy,
/// with A Hermitian (n x n) and B (n x k). The solution satisfies
/// (A + lambda I) X = B with A + lambda I PSD.
struct SphereQpSolution {
    CMatrix x;
    double lambda = 0.0;
    bool hard_case = false;
};

SphereQpSolution solve_sphere_qp(const CMatrix& a, const CMatrix& b, double energy);

double sphere_qp_objective(const CMatrix& a, const CMatrix& b, const CMatrix& x);

}  // namespace isac
