// SPDX-License-Identifier: Apache-2.0
#include "mimostats/matrix_kernels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace mimostats {

HermitianMatrix::HermitianMatrix(ComplexMatrix m) {
  if (m.rows() != m.cols()) {
    throw NotHermitianError("HermitianMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", not square");
  }
  const double scale = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (asym > 1e-12 * scale) {
    throw NotHermitianError("HermitianMatrix: ||M - M^H|| = " + std::to_string(asym) +
                            " exceeds 1e-12 * ||M||");
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Identity(n, n);
  return h;
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Zero(n, n);
  return h;
}

HermitianMatrix hermitian_sqrt(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.mat());
  if (es.info() != Eigen::Success) {
    throw Error("hermitian_sqrt: eigendecomposition failed");
  }
  RealVector lam = es.eigenvalues();
  const double lam_max = std::max(lam.maxCoeff(), 0.0);
  const double band = 1e-10 * lam_max;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -band) {
      throw NotPsdError("hermitian_sqrt: eigenvalue " + std::to_string(lam(i)) +
                        " below the -1e-10 * lambda_max clamping band");
    }
    lam(i) = lam(i) > 0.0 ? std::sqrt(lam(i)) : 0.0;
  }
  ComplexMatrix s = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return HermitianMatrix(0.5 * (s + s.adjoint().eval()));
}

double logdet_hpd(const HermitianMatrix& m) {
  Eigen::LLT<ComplexMatrix> llt(m.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("logdet_hpd: Cholesky factorization hit a nonpositive pivot");
  }
  double logdet = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    logdet += std::log(l(i, i).real());
  }
  return 2.0 * logdet;
}

ComplexMatrix solve_hpd(const HermitianMatrix& m, const ComplexMatrix& rhs) {
  if (rhs.rows() != m.dim()) {
    throw Error("solve_hpd: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                std::to_string(m.dim()));
  }
  Eigen::LLT<ComplexMatrix> llt(m.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("solve_hpd: Cholesky factorization hit a nonpositive pivot");
  }
  return llt.solve(rhs);
}

double max_singular_value(const ComplexMatrix& m) {
  if (m.size() == 0) {
    throw Error("max_singular_value: empty matrix");
  }
  // sigma_max(m) = sqrt(lambda_max(m^H m)); work on the smaller Gram matrix.
  ComplexMatrix gram;
  if (m.rows() <= m.cols()) {
    gram = m * m.adjoint();
  } else {
    gram = m.adjoint() * m;
  }
  gram = 0.5 * (gram + gram.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error("max_singular_value: eigendecomposition failed");
  }
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace mimostats
