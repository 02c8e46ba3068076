/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace maxmin_beam {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Returns h h^H. Throws DimensionError on an empty vector.
ComplexMatrix outer_hermitian(const ComplexVector& h);

/// Entrywise real part, stored back as a complex matrix with zero imaginary parts.
ComplexMatrix real_part_matrix(const ComplexMatrix& s);

/// True when `s` is square and |s_ij - conj(s_ji)| <= tol * max(1, max|s|).
bool is_hermitian(const ComplexMatrix& s, double tol = 1e-12);

/// Largest eigenvalue of a Hermitian positive semidefinite matrix.
///
/// Power iteration from the normalized all-ones vector with a Rayleigh-quotient
/// stopping rule (relative change below `tol`) and a cap of 10 000 iterations.
/// A second deterministic start guards against the all-ones vector being
/// orthogonal to the dominant eigenspace; the larger quotient wins.
///
/// Throws ContractError for non-Hermitian input and ConvergenceError (carrying
/// the best estimate) if the cap is reached.
double max_eigenvalue(const ComplexMatrix& s, double tol = 1e-12);

/// w^H S w as a real number. Throws DimensionError on shape mismatch.
double quadratic_form(const ComplexVector& w, const ComplexMatrix& s);

}  // namespace maxmin_beam
