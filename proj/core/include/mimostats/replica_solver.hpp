// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "mimostats/channel_model.hpp"

namespace mimostats {

enum class SolveMethod { damped_picard, nested_bisection };

/// Solution of the coupled trace equations w = Tr(D1 T~), z = Tr(A1 R),
/// with the residuals evaluated at the returned point.
struct FixedPoint {
  double w = 0.0;
  double z = 0.0;
  double residual_w = 0.0;
  double residual_z = 0.0;
  int iterations = 0;
  SolveMethod method = SolveMethod::damped_picard;
};

/// The three independent resolvent blocks at a point (w, z):
///   A1 = [I + w R + H~ (I + z T~)^{-1} H~^H]^{-1}
///   D1 = [I + z T~ + H~^H (I + w R)^{-1} H~]^{-1}
///   C1 = (I + z T~)^{-1} H~^H A1
/// B1 is not stored; B1 = -C1^H.
/// All inner inverses are applied through Cholesky solves of matrices of the
/// form I + PSD, so singular T~ or R never get inverted.
struct ResolventSet {
  HermitianMatrix a1;
  HermitianMatrix d1;
  ComplexMatrix c1;
};

/// Asymptotic Gaussian statistics of the mutual information in nats per
/// complex dimension. stability_margin = gamma^2 - alpha*beta lies in (0, 1]
/// and variance_nats2 = -ln(stability_margin).
struct AsymptoticStats {
  double mean_nats = 0.0;
  double variance_nats2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  double stability_margin = 1.0;
};

ResolventSet resolvents(const EffectiveChannel& eff, double w, double z);

/// One application of the fixed-point map: (Tr(D1 T~), Tr(A1 R)) at (w, z).
std::pair<double, double> fixed_point_map(const EffectiveChannel& eff, double w, double z);

/// Solves the fixed-point equations by damped Picard iteration, falling back
/// to nested bisection if Picard has not converged after max_iter/2 steps.
/// Success means max(|residual_w|, |residual_z|) <= tol * (1 + w + z).
FixedPoint solve_fixed_point(const EffectiveChannel& eff, double tol = 1e-12,
                             int max_iter = 10000);

/// Pure nested-bisection solver: the inner root w = g(z) of Tr(D1 T~)/w = 1
/// is bracketed in (0, Tr(T~)] and the outer root of Tr(A1 R)/z = 1 in
/// (0, Tr(R)]; both ratio functions are strictly decreasing, which makes the
/// sign-based bisection valid. Used as the cross-check for the Picard path.
FixedPoint solve_fixed_point_bisection(const EffectiveChannel& eff, double tol = 1e-12,
                                       int max_iter = 10000);

/// Mean via ln det(I + wR) + ln det(I + zT~ + H~^H (I + wR)^{-1} H~) - wz
/// (Schur-complement form of the 2x2 block determinant, both factors HPD);
/// gamma via the norm form 1 - ||T~^{1/2} C1 R^{1/2}||_F^2.
AsymptoticStats asymptotic_stats(const EffectiveChannel& eff, const FixedPoint& fp);

/// gamma via the independent trace route 1 + Tr(B1 T~ C1 R) with
/// B1 = -(I + wR)^{-1} H~ D1 recomputed from the D1 block. Agrees with the
/// norm form to 1e-10; exposed for the cross-route check.
double gamma_trace_form(const EffectiveChannel& eff, const ResolventSet& rs, double w);

}  // namespace mimostats
