// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mimostats/errors.hpp"

namespace mimostats {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Value type for Hermitian matrices. The constructor validates
/// ||M - M^H|| <= 1e-12 * ||M|| and stores the symmetrized (M + M^H)/2,
/// so downstream algebra can rely on exact Hermitian storage.
/// Positive (semi-)definiteness is not checked here; operations that
/// need it check by attempted factorization.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(ComplexMatrix m);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix zero(Eigen::Index n);

  const ComplexMatrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

/// Matrix square root of a Hermitian PSD matrix via unitary
/// eigendecomposition with the nonnegative root of each eigenvalue.
/// Eigenvalues in [-1e-10 * lambda_max, 0) are clamped to zero;
/// anything below that band raises NotPsdError.
HermitianMatrix hermitian_sqrt(const HermitianMatrix& m);

/// ln det(m) in nats for Hermitian positive definite m, computed from a
/// Cholesky factorization (log domain throughout, no determinant overflow).
double logdet_hpd(const HermitianMatrix& m);

/// Solves m * X = rhs for Hermitian positive definite m.
ComplexMatrix solve_hpd(const HermitianMatrix& m, const ComplexMatrix& rhs);

/// Largest singular value of an arbitrary complex matrix.
double max_singular_value(const ComplexMatrix& m);

}  // namespace mimostats
