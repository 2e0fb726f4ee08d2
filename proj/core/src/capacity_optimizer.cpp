// SPDX-License-Identifier: Apache-2.0
#include "mimostats/capacity_optimizer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace mimostats {

LosEigenmodes los_eigenmodes(const ComplexMatrix& h_bar) {
  const Eigen::Index n_t = h_bar.cols();
  LosEigenmodes out;
  if (h_bar.squaredNorm() == 0.0) {
    out.eigvals = RealVector::Zero(n_t);
    out.eigvecs = ComplexMatrix::Identity(n_t, n_t);
    return out;
  }
  ComplexMatrix gram = h_bar.adjoint() * h_bar;
  gram = 0.5 * (gram + gram.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  if (es.info() != Eigen::Success) {
    throw Error("los_eigenmodes: eigendecomposition failed");
  }
  out.eigvals = RealVector(n_t);
  out.eigvecs = ComplexMatrix(n_t, n_t);
  for (Eigen::Index i = 0; i < n_t; ++i) {
    // Eigen sorts ascending; flip to descending and clamp rounding negatives.
    out.eigvals(i) = std::max(es.eigenvalues()(n_t - 1 - i), 0.0);
    out.eigvecs.col(i) = es.eigenvectors().col(n_t - 1 - i);
  }
  return out;
}

namespace {

// Exact water level for q_i = (xi - level_i)_+ with sum(q) = rho: sort the
// levels, then the active set is the largest k with (rho + prefix_k)/k above
// the k-th smallest level.
WaterfillResult waterfill_levels(const RealVector& levels, double rho) {
  const Eigen::Index n = levels.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return levels(a) < levels(b); });

  double xi = 0.0;
  double prefix = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    prefix += levels(order[k - 1]);
    const double cand = (rho + prefix) / static_cast<double>(k);
    if (cand > levels(order[k - 1])) {
      xi = cand;
    }
  }
  WaterfillResult out;
  out.xi = xi;
  out.q_diag = (xi - levels.array()).max(0.0);
  return out;
}

}  // namespace

WaterfillResult waterfill_powers(const RealVector& eigvals, double w, double rho) {
  if (w < 0.0) {
    throw OutOfRangeError("waterfill_powers: w must be nonnegative");
  }
  if (!(rho > 0.0)) {
    throw OutOfRangeError("waterfill_powers: rho must be positive");
  }
  if ((eigvals.array() < 0.0).any()) {
    throw OutOfRangeError("waterfill_powers: eigenvalues must be nonnegative");
  }
  const RealVector levels = (1.0 + w) / (1.0 + w + eigvals.array());
  return waterfill_levels(levels, rho);
}

namespace {

bool is_identity(const HermitianMatrix& m) {
  return (m.mat() - ComplexMatrix::Identity(m.dim(), m.dim())).norm() <=
         1e-12 * std::sqrt(static_cast<double>(m.dim()));
}

struct Evaluation {
  FixedPoint fp;
  double capacity = 0.0;
};

Evaluation evaluate(const ChannelSpec& spec, const ComplexMatrix& eigvecs,
                    const RealVector& q_diag, double fp_tol) {
  ComplexMatrix q = eigvecs * q_diag.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                    eigvecs.adjoint();
  const EffectiveChannel eff =
      effective_channel(spec, HermitianMatrix(0.5 * (q + q.adjoint().eval())));
  Evaluation ev;
  ev.fp = solve_fixed_point(eff, fp_tol);
  ev.capacity = asymptotic_stats(eff, ev.fp).mean_nats;
  return ev;
}

// Water-filling over the fixed-(w, z) levels (1+w)/(z(1+w)+lambda_i).
WaterfillResult inner_fill(const RealVector& lam, double w, double z, double rho) {
  const RealVector levels = (1.0 + w) / (z * (1.0 + w) + lam.array());
  return waterfill_levels(levels, rho);
}

}  // namespace

WaterfillingSolution optimize_uncorrelated(const ChannelSpec& raw_spec, double tol,
                                           int max_outer) {
  const ChannelSpec spec = normalize_spec(raw_spec);
  if (!is_identity(spec.t_corr) || !is_identity(spec.r_corr)) {
    throw NotUncorrelatedError("optimize_uncorrelated: requires T = I and R = I");
  }
  const double rho = db_to_linear(spec.snr_db);
  if (!(rho > 0.0)) {
    throw OutOfRangeError("optimize_uncorrelated: rho must be positive");
  }
  const int n_t = spec.n_t;
  const double fp_tol = std::min(tol * 1e-2, 1e-12);
  const LosEigenmodes modes = los_eigenmodes(spec.h_bar);

  WaterfillingSolution sol;
  sol.q_bar_diag = RealVector::Constant(n_t, rho / static_cast<double>(n_t));

  if (spec.h_bar.squaredNorm() == 0.0) {
    // All eigenmodes identical: uniform allocation is optimal outright.
    Evaluation ev = evaluate(spec, modes.eigvecs, sol.q_bar_diag, fp_tol);
    sol.w = ev.fp.w;
    sol.z = ev.fp.z;
    sol.capacity_nats = ev.capacity;
    sol.xi = rho / static_cast<double>(n_t) + 1.0 / sol.z;
    sol.outer_iterations = 1;
    return sol;
  }

  Evaluation acc = evaluate(spec, modes.eigvecs, sol.q_bar_diag, fp_tol);
  WaterfillResult proposal = inner_fill(modes.eigvals, acc.fp.w, acc.fp.z, rho);
  double theta = 1.0;
  int outer = 1;
  bool converged = (proposal.q_diag - sol.q_bar_diag).cwiseAbs().maxCoeff() <= tol * (1.0 + rho);

  while (!converged && outer < max_outer) {
    ++outer;
    const RealVector q_try =
        (1.0 - theta) * sol.q_bar_diag + theta * proposal.q_diag;
    Evaluation ev = evaluate(spec, modes.eigvecs, q_try, fp_tol);
    if (ev.capacity < acc.capacity - 1e-9) {
      theta *= 0.5;
      if (theta < 1.0 / 64.0) {
        throw NoConvergenceError(
            "optimize_uncorrelated: capacity decreased at the damping floor");
      }
      continue;
    }
    sol.q_bar_diag = q_try;
    acc = ev;
    proposal = inner_fill(modes.eigvals, acc.fp.w, acc.fp.z, rho);
    converged = (proposal.q_diag - sol.q_bar_diag).cwiseAbs().maxCoeff() <= tol * (1.0 + rho);
  }
  if (!converged) {
    throw NoConvergenceError("optimize_uncorrelated: no convergence in " +
                             std::to_string(max_outer) + " outer iterations");
  }
  sol.w = acc.fp.w;
  sol.z = acc.fp.z;
  sol.capacity_nats = acc.capacity;
  sol.xi = proposal.xi;
  sol.outer_iterations = outer;
  return sol;
}

}  // namespace mimostats
