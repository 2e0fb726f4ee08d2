// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimostats/replica_solver.hpp"

namespace mimostats {

/// Eigendecomposition of H_bar^H H_bar, eigenvalues descending. The
/// capacity-achieving covariance shares these eigenvectors.
struct LosEigenmodes {
  RealVector eigvals;
  ComplexMatrix eigvecs;  // columns are eigenvectors
};

LosEigenmodes los_eigenmodes(const ComplexMatrix& h_bar);

struct WaterfillResult {
  RealVector q_diag;
  double xi = 0.0;
};

/// Water-filling over levels (1+w)/(1+w+lambda_i): q_i = (xi - level_i)_+
/// with xi the unique value meeting sum(q) = rho, found by the exact sorted
/// piecewise-linear solve (no iteration, no tolerance).
WaterfillResult waterfill_powers(const RealVector& eigvals, double w, double rho);

/// Eigen-domain powers of the ergodic-capacity-achieving covariance of a
/// spatially uncorrelated (T = R = I) Rician channel.
struct WaterfillingSolution {
  RealVector q_bar_diag;  // powers in descending-eigenvalue order, sum = rho
  double xi = 0.0;        // water level: q_i = (xi - (1+w)/(z(1+w)+lambda_i))_+
  double w = 0.0;
  double z = 0.0;
  double capacity_nats = 0.0;
  int outer_iterations = 0;
};

/// Alternates (a) solving the fixed point at the current covariance with
/// (b) re-water-filling the eigen-domain powers at the resulting (w, z),
/// until neither moves. The inner step maximizes the asymptotic mean
/// n_r ln(1+w) + sum_i ln(1 + (z + lambda_i/(1+w)) q_i) - wz at fixed (w, z),
/// whose exact solution is water-filling over levels (1+w)/(z(1+w)+lambda_i).
/// Capacity is monitored across accepted iterations; on a decrease the power
/// update is damped by averaging with the previous powers, and NoConvergence
/// is raised if decreases persist at the damping floor.
WaterfillingSolution optimize_uncorrelated(const ChannelSpec& spec, double tol = 1e-10,
                                           int max_outer = 500);

}  // namespace mimostats
