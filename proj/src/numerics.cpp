/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "maxmin_beam/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxmin_beam/errors.hpp"

namespace maxmin_beam {

namespace {

constexpr int kPowerIterationCap = 10000;

struct PowerResult {
  double value = 0.0;
  bool converged = false;
};

PowerResult power_iterate(const ComplexMatrix& s, ComplexVector v, double tol) {
  PowerResult result;
  v.normalize();
  double previous = (v.adjoint() * s * v)(0).real();
  for (int it = 0; it < kPowerIterationCap; ++it) {
    ComplexVector next = s * v;
    const double norm = next.norm();
    if (norm == 0.0) {
      // start vector lies in the null space
      result.value = 0.0;
      result.converged = true;
      return result;
    }
    v = next / norm;
    const double rq = (v.adjoint() * s * v)(0).real();
    if (std::abs(rq - previous) <= tol * std::max(std::abs(rq), 1e-300)) {
      result.value = rq;
      result.converged = true;
      return result;
    }
    previous = rq;
  }
  result.value = previous;
  return result;
}

}  // namespace

ComplexMatrix outer_hermitian(const ComplexVector& h) {
  if (h.size() == 0) {
    throw DimensionError("outer_hermitian: empty vector");
  }
  return h * h.adjoint();
}

ComplexMatrix real_part_matrix(const ComplexMatrix& s) {
  return s.real().cast<Complex>();
}

bool is_hermitian(const ComplexMatrix& s, double tol) {
  if (s.rows() != s.cols()) return false;
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = i; j < s.cols(); ++j) {
      if (std::abs(s(i, j) - std::conj(s(j, i))) > tol * scale) return false;
    }
  }
  return true;
}

double max_eigenvalue(const ComplexMatrix& s, double tol) {
  if (s.rows() == 0 || !is_hermitian(s)) {
    throw ContractError("max_eigenvalue: matrix is not Hermitian");
  }
  const Eigen::Index n = s.rows();
  if (s.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (n == 1) return s(0, 0).real();

  const PowerResult ones = power_iterate(s, ComplexVector::Ones(n), tol);
  ComplexVector alt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    alt(i) = std::polar(1.0 + 0.5 * static_cast<double>(i) / static_cast<double>(n),
                        1.3 * static_cast<double>(i));
  }
  const PowerResult other = power_iterate(s, alt, tol);
  const double best = std::max(ones.value, other.value);
  if (!ones.converged && !other.converged) {
    throw ConvergenceError("max_eigenvalue: iteration cap reached", best);
  }
  return best;
}

double quadratic_form(const ComplexVector& w, const ComplexMatrix& s) {
  if (s.rows() != s.cols() || s.rows() != w.size()) {
    throw DimensionError("quadratic_form: expected " + std::to_string(s.rows()) +
                         "x" + std::to_string(s.cols()) + " matrix for a length " +
                         std::to_string(w.size()) + " vector");
  }
  return (w.adjoint() * s * w)(0).real();
}

}  // namespace maxmin_beam
