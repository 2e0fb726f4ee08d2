// SPDX-License-Identifier: Apache-2.0
#include "mimostats/replica_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mimostats {

namespace {

ComplexMatrix identity_like(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

HermitianMatrix shifted(const HermitianMatrix& m, double scale) {
  // I + scale * m, exact Hermitian by construction.
  ComplexMatrix out = scale * m.mat();
  out.diagonal().array() += 1.0;
  return HermitianMatrix(std::move(out));
}

// Tr(D1 T~) without forming A1; one Cholesky each of I + wR and of the
// D1 denominator.
double trace_d1_t(const EffectiveChannel& eff, double w, double z) {
  const HermitianMatrix mr = shifted(eff.r_corr, w);
  const ComplexMatrix y = solve_hpd(mr, eff.h_tilde);  // (I + wR)^{-1} H~
  ComplexMatrix sd = z * eff.t_tilde.mat() + eff.h_tilde.adjoint() * y;
  sd.diagonal().array() += 1.0;
  const HermitianMatrix sd_h(0.5 * (sd + sd.adjoint().eval()));
  return (solve_hpd(sd_h, eff.t_tilde.mat())).trace().real();
}

// Tr(A1 R) without forming D1.
double trace_a1_r(const EffectiveChannel& eff, double w, double z) {
  const HermitianMatrix mt = shifted(eff.t_tilde, z);
  const ComplexMatrix x = solve_hpd(mt, eff.h_tilde.adjoint());  // (I + zT~)^{-1} H~^H
  ComplexMatrix sa = w * eff.r_corr.mat() + eff.h_tilde * x;
  sa.diagonal().array() += 1.0;
  const HermitianMatrix sa_h(0.5 * (sa + sa.adjoint().eval()));
  return (solve_hpd(sa_h, eff.r_corr.mat())).trace().real();
}

}  // namespace

ResolventSet resolvents(const EffectiveChannel& eff, double w, double z) {
  if (w < 0.0 || z < 0.0) {
    throw Error("resolvents: w and z must be nonnegative");
  }
  const Eigen::Index n_r = eff.r_corr.dim();
  const Eigen::Index n_t = eff.t_tilde.dim();

  const HermitianMatrix mt = shifted(eff.t_tilde, z);  // I + z T~
  const HermitianMatrix mr = shifted(eff.r_corr, w);   // I + w R

  const ComplexMatrix x = solve_hpd(mt, eff.h_tilde.adjoint());  // (I + zT~)^{-1} H~^H
  ComplexMatrix sa = w * eff.r_corr.mat() + eff.h_tilde * x;
  sa.diagonal().array() += 1.0;
  const HermitianMatrix sa_h(0.5 * (sa + sa.adjoint().eval()));

  const ComplexMatrix y = solve_hpd(mr, eff.h_tilde);  // (I + wR)^{-1} H~
  ComplexMatrix sd = z * eff.t_tilde.mat() + eff.h_tilde.adjoint() * y;
  sd.diagonal().array() += 1.0;
  const HermitianMatrix sd_h(0.5 * (sd + sd.adjoint().eval()));

  ResolventSet rs;
  ComplexMatrix a1 = solve_hpd(sa_h, identity_like(n_r));
  rs.a1 = HermitianMatrix(0.5 * (a1 + a1.adjoint().eval()));
  ComplexMatrix d1 = solve_hpd(sd_h, identity_like(n_t));
  rs.d1 = HermitianMatrix(0.5 * (d1 + d1.adjoint().eval()));
  rs.c1 = x * rs.a1.mat();
  return rs;
}

std::pair<double, double> fixed_point_map(const EffectiveChannel& eff, double w, double z) {
  return {trace_d1_t(eff, w, z), trace_a1_r(eff, w, z)};
}

namespace {

bool degenerate_power(const EffectiveChannel& eff) { return eff.t_tilde.trace() <= 0.0; }

FixedPoint degenerate_fixed_point(const EffectiveChannel& eff, SolveMethod method) {
  // Tr(T~) = 0 forces w = 0; z follows directly from the w = 0 resolvent.
  FixedPoint fp;
  fp.w = 0.0;
  fp.z = trace_a1_r(eff, 0.0, 0.0);
  fp.residual_w = 0.0;
  fp.residual_z = 0.0;
  fp.iterations = 0;
  fp.method = method;
  return fp;
}

// Unique root in w of psi1(w, z) = Tr(D1 T~)/w = 1 at fixed z. psi1 is
// strictly decreasing in w with psi1(0+) = +inf, and Tr(D1 T~) <= Tr(T~)
// brackets the root in (0, Tr(T~)].
double inner_root_w(const EffectiveChannel& eff, double z, double tol) {
  const double tr_t = eff.t_tilde.trace();
  double hi = tr_t;
  double lo = hi;
  // Expand the lower end until psi1 > 1 (equivalently Tr(D1 T~) > w).
  for (int k = 0; k < 200; ++k) {
    lo *= 0.5;
    if (trace_d1_t(eff, lo, z) > lo) break;
    if (lo < 1e-300) return 0.0;
  }
  for (int it = 0; it < 200 && (hi - lo) > 0.25 * tol * (1.0 + lo + z); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (trace_d1_t(eff, mid, z) > mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FixedPoint solve_fixed_point_bisection(const EffectiveChannel& eff, double tol, int max_iter) {
  if (degenerate_power(eff)) {
    return degenerate_fixed_point(eff, SolveMethod::nested_bisection);
  }
  const double tr_r = eff.r_corr.trace();
  if (tr_r <= 0.0) {
    throw ZeroTraceError("solve_fixed_point: Tr(R) = 0");
  }

  // Outer root in z of psi2(g(z), z) = Tr(A1 R)/z = 1, bracketed in (0, Tr(R)].
  const double inner_tol = 0.02 * tol;
  double hi = tr_r;
  double lo = hi;
  int evals = 0;
  auto outer_above = [&](double z) {
    const double w = inner_root_w(eff, z, inner_tol);
    ++evals;
    return trace_a1_r(eff, w, z) > z;
  };
  for (int k = 0; k < 200; ++k) {
    lo *= 0.5;
    if (outer_above(lo)) break;
    if (lo < 1e-300) break;
  }
  for (int it = 0; it < 200 && (hi - lo) > 0.25 * tol * (1.0 + lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (outer_above(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (evals > max_iter) break;
  }

  FixedPoint fp;
  fp.method = SolveMethod::nested_bisection;
  fp.z = 0.5 * (lo + hi);
  fp.w = inner_root_w(eff, fp.z, inner_tol);
  fp.iterations = evals;
  const auto [fw, fz] = fixed_point_map(eff, fp.w, fp.z);
  fp.residual_w = fw - fp.w;
  fp.residual_z = fz - fp.z;
  if (std::max(std::abs(fp.residual_w), std::abs(fp.residual_z)) >
      tol * (1.0 + fp.w + fp.z)) {
    throw NoConvergenceError("solve_fixed_point_bisection: residuals " +
                             std::to_string(fp.residual_w) + ", " +
                             std::to_string(fp.residual_z) + " above tolerance");
  }
  return fp;
}

FixedPoint solve_fixed_point(const EffectiveChannel& eff, double tol, int max_iter) {
  if (degenerate_power(eff)) {
    return degenerate_fixed_point(eff, SolveMethod::damped_picard);
  }
  if (eff.r_corr.trace() <= 0.0) {
    throw ZeroTraceError("solve_fixed_point: Tr(R) = 0");
  }

  // No-interaction upper estimates; uniqueness makes the start a speed choice.
  double w = eff.t_tilde.trace();
  double z = eff.r_corr.trace();
  double eta = 1.0;
  double prev_res = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= max_iter / 2; ++it) {
    const auto [fw, fz] = fixed_point_map(eff, w, z);
    const double rw = fw - w;
    const double rz = fz - z;
    const double res = std::max(std::abs(rw), std::abs(rz));
    if (res <= tol * (1.0 + w + z)) {
      FixedPoint fp;
      fp.w = w;
      fp.z = z;
      fp.residual_w = rw;
      fp.residual_z = rz;
      fp.iterations = it;
      fp.method = SolveMethod::damped_picard;
      return fp;
    }
    if (res > prev_res) {
      eta = std::max(0.5 * eta, 1.0 / 64.0);
    }
    prev_res = res;
    w += eta * rw;
    z += eta * rz;
  }
  return solve_fixed_point_bisection(eff, tol, max_iter);
}

double gamma_trace_form(const EffectiveChannel& eff, const ResolventSet& rs, double w) {
  const HermitianMatrix mr = shifted(eff.r_corr, w);
  const ComplexMatrix b1 = -(solve_hpd(mr, eff.h_tilde) * rs.d1.mat());
  return 1.0 + (b1 * eff.t_tilde.mat() * rs.c1 * eff.r_corr.mat()).trace().real();
}

AsymptoticStats asymptotic_stats(const EffectiveChannel& eff, const FixedPoint& fp) {
  const double w = fp.w;
  const double z = fp.z;
  const ResolventSet rs = resolvents(eff, w, z);

  AsymptoticStats st;

  const HermitianMatrix mr = shifted(eff.r_corr, w);
  // ln det of the Schur complement I + zT~ + H~^H (I+wR)^{-1} H~ equals
  // -ln det(D1).
  st.mean_nats = logdet_hpd(mr) - logdet_hpd(rs.d1) - w * z;

  const ComplexMatrix ar = rs.a1.mat() * eff.r_corr.mat();
  const ComplexMatrix dt = rs.d1.mat() * eff.t_tilde.mat();
  st.alpha = (ar * ar).trace().real();
  st.beta = (dt * dt).trace().real();

  const HermitianMatrix sqrt_t = hermitian_sqrt(eff.t_tilde);
  const HermitianMatrix sqrt_r = hermitian_sqrt(eff.r_corr);
  st.gamma = 1.0 - (sqrt_t.mat() * rs.c1 * sqrt_r.mat()).squaredNorm();

  st.stability_margin = st.gamma * st.gamma - st.alpha * st.beta;
  if (st.stability_margin <= 0.0 || st.stability_margin > 1.0 + 1e-12) {
    throw StabilityViolationError("asymptotic_stats: gamma^2 - alpha*beta = " +
                                  std::to_string(st.stability_margin) +
                                  " outside (0, 1]; solver or input defect");
  }
  st.variance_nats2 = st.stability_margin >= 1.0 ? 0.0 : -std::log(st.stability_margin);
  return st;
}

}  // namespace mimostats
