// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/types.hpp"

namespace isac::linalg {

// Small dense helpers shared across modules. Everything here takes and
// returns values; nothing is cached.

double log2_det_hpd(const CMatrix& a);
/// log2 |det(a)| for a general square matrix via partial-pivot LU.
double log2_abs_det(const CMatrix& a);

bool is_hermitian(const CMatrix& a, double tol = 1e-10);
/// Hermitian within tol and smallest eigenvalue >= -tol (both scaled by max(1, |a|)).
bool is_psd(const CMatrix& a, double tol = 1e-10);

CMatrix hermitian_part(const CMatrix& a);

/// Principal square root of a Hermitian PSD matrix (negative eigenvalues clipped).
CMatrix psd_sqrt(const CMatrix& a);

/// Euclidean projection onto {Q Hermitian PSD, Tr(Q) <= budget}.
CMatrix project_psd_trace_ball(const CMatrix& q, double budget);

/// Euclidean projection of v onto {x >= 0, sum(x) <= budget}.
RVector project_capped_simplex(const RVector& v, double budget);

/// Unitary n x n DFT matrix, entry (r, c) = exp(-j 2 pi r c / n) / sqrt(n).
CMatrix unitary_dft(int n);

}  // namespace isac::linalg
