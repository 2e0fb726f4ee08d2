// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimostats/matrix_kernels.hpp"

namespace mimostats {

/// Deterministic description of a separately (Kronecker) correlated Rician
/// channel H = H_bar + R^{1/2} H_w T^{1/2}. SNR and Rice factor are stored
/// in dB; rice_k_db = -inf denotes the Rayleigh case (K = 0).
struct ChannelSpec {
  int n_t = 1;
  int n_r = 1;
  ComplexMatrix h_bar;       // n_r x n_t line-of-sight component
  HermitianMatrix t_corr;    // n_t x n_t transmit correlation, PSD
  HermitianMatrix r_corr;    // n_r x n_r receive correlation, PSD
  double snr_db = 0.0;
  double rice_k_db = 0.0;
};

/// Channel with the input covariance absorbed:
/// h_tilde = H_bar Q^{1/2}, t_tilde = Q^{1/2} T Q^{1/2}.
struct EffectiveChannel {
  ComplexMatrix h_tilde;
  HermitianMatrix t_tilde;
  HermitianMatrix r_corr;
};

struct DominanceRatios {
  double dom_r = 1.0;  // sigma_max(R) / (Tr(R)/n_r)
  double dom_t = 1.0;  // sigma_max(T_tilde) / (Tr(T_tilde)/n_t)
};

/// 10^(db/10); maps -inf to 0.
double db_to_linear(double db);

/// Exponential correlation matrix M_ij = alpha^|i-j|, alpha in [0, 1).
HermitianMatrix exponential_correlation(int dim, double alpha);

/// All-ones (rank one) LOS matrix, before Rice-factor scaling.
ComplexMatrix uniform_los(int n_r, int n_t);

/// Rescales correlations to Tr(T) = n_t, Tr(R) = n_r and the LOS matrix to
/// ||H_bar||^2 = K Tr(R) Tr(T) with K taken from rice_k_db. K = 0 forces
/// h_bar to zero. Idempotent.
ChannelSpec normalize_spec(const ChannelSpec& spec);

/// Scalar input covariance Q = q I with q = rho n_r / ((K+1) Tr(R) Tr(T)).
/// Requires a normalized spec, where this reduces to q = rho / ((K+1) n_t).
HermitianMatrix scalar_covariance(const ChannelSpec& spec);

/// Absorbs the covariance: h_tilde = H_bar Q^{1/2}, t_tilde = Q^{1/2} T Q^{1/2}.
/// A scalar Q = q I is detected and applied exactly as t_tilde = q T.
EffectiveChannel effective_channel(const ChannelSpec& spec, const HermitianMatrix& q);

/// Eigenmode-dominance ratios; values near the dimension indicate a dominant
/// eigenmode (finite-n proxy for the Gaussian-limit conditions, reported as a
/// warning by the CLI, not a decision procedure).
DominanceRatios gaussianity_diagnostics(const EffectiveChannel& eff);

}  // namespace mimostats
