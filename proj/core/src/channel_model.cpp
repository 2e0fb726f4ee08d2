// SPDX-License-Identifier: Apache-2.0
#include "mimostats/channel_model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mimostats {

double db_to_linear(double db) {
  if (std::isinf(db) && db < 0) {
    return 0.0;
  }
  return std::pow(10.0, db / 10.0);
}

HermitianMatrix exponential_correlation(int dim, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidAlphaError("exponential_correlation: alpha = " + std::to_string(alpha) +
                            " outside [0, 1)");
  }
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      m(i, j) = std::pow(alpha, std::abs(i - j));
    }
  }
  return HermitianMatrix(std::move(m));
}

ComplexMatrix uniform_los(int n_r, int n_t) {
  return ComplexMatrix::Ones(n_r, n_t);
}

namespace {

void check_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

ChannelSpec normalize_spec(const ChannelSpec& spec) {
  ChannelSpec out = spec;
  check_finite(spec.h_bar, "normalize_spec");

  const double tr_t = spec.t_corr.trace();
  const double tr_r = spec.r_corr.trace();
  if (tr_t <= 0.0 || tr_r <= 0.0) {
    throw ZeroTraceError("normalize_spec: correlation matrix has nonpositive trace");
  }
  out.t_corr = HermitianMatrix(spec.t_corr.mat() * (static_cast<double>(spec.n_t) / tr_t));
  out.r_corr = HermitianMatrix(spec.r_corr.mat() * (static_cast<double>(spec.n_r) / tr_r));

  const double k = db_to_linear(spec.rice_k_db);
  if (k == 0.0) {
    out.h_bar = ComplexMatrix::Zero(spec.n_r, spec.n_t);
    return out;
  }
  const double los_norm2 = spec.h_bar.squaredNorm();
  if (los_norm2 == 0.0) {
    throw ZeroLosError("normalize_spec: K > 0 requires a nonzero LOS matrix");
  }
  // ||H_bar||^2 = K Tr(R) Tr(T) with normalized traces n_r, n_t.
  const double target = k * static_cast<double>(spec.n_r) * static_cast<double>(spec.n_t);
  out.h_bar = spec.h_bar * std::sqrt(target / los_norm2);
  check_finite(out.h_bar, "normalize_spec");
  return out;
}

HermitianMatrix scalar_covariance(const ChannelSpec& spec) {
  const double rho = db_to_linear(spec.snr_db);
  const double k = db_to_linear(spec.rice_k_db);
  const double tr_t = spec.t_corr.trace();
  const double tr_r = spec.r_corr.trace();
  const double q = rho * static_cast<double>(spec.n_r) / ((k + 1.0) * tr_r * tr_t);
  return HermitianMatrix(q * ComplexMatrix::Identity(spec.n_t, spec.n_t));
}

namespace {

// Returns q >= 0 if m == q I exactly, otherwise a negative sentinel.
double scalar_multiple_of_identity(const HermitianMatrix& m) {
  const ComplexMatrix& a = m.mat();
  const double q = a(0, 0).real();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const std::complex<double> want = (i == j) ? std::complex<double>(q, 0.0)
                                                 : std::complex<double>(0.0, 0.0);
      if (a(i, j) != want) {
        return -1.0;
      }
    }
  }
  return q >= 0.0 ? q : -1.0;
}

}  // namespace

EffectiveChannel effective_channel(const ChannelSpec& spec, const HermitianMatrix& q) {
  if (q.dim() != spec.n_t) {
    throw Error("effective_channel: covariance dimension mismatch");
  }
  EffectiveChannel eff;
  eff.r_corr = spec.r_corr;

  const double scalar_q = scalar_multiple_of_identity(q);
  if (scalar_q >= 0.0) {
    eff.h_tilde = std::sqrt(scalar_q) * spec.h_bar;
    eff.t_tilde = HermitianMatrix(scalar_q * spec.t_corr.mat());
    return eff;
  }
  const HermitianMatrix sq = hermitian_sqrt(q);
  eff.h_tilde = spec.h_bar * sq.mat();
  ComplexMatrix tt = sq.mat() * spec.t_corr.mat() * sq.mat();
  eff.t_tilde = HermitianMatrix(0.5 * (tt + tt.adjoint().eval()));
  return eff;
}

DominanceRatios gaussianity_diagnostics(const EffectiveChannel& eff) {
  const double tr_r = eff.r_corr.trace();
  const double tr_t = eff.t_tilde.trace();
  if (tr_t <= 0.0 || tr_r <= 0.0) {
    throw ZeroTraceError("gaussianity_diagnostics: zero-trace matrix");
  }
  DominanceRatios d;
  d.dom_r = max_singular_value(eff.r_corr.mat()) / (tr_r / static_cast<double>(eff.r_corr.dim()));
  d.dom_t = max_singular_value(eff.t_tilde.mat()) / (tr_t / static_cast<double>(eff.t_tilde.dim()));
  return d;
}

}  // namespace mimostats
