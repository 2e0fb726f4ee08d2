// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mimostats/channel_model.hpp"

using mimostats::ChannelSpec;
using mimostats::ComplexMatrix;
using mimostats::HermitianMatrix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChannelSpec make_spec(int n, double k_db, double alpha, double snr_db) {
  ChannelSpec spec;
  spec.n_t = spec.n_r = n;
  spec.h_bar = mimostats::uniform_los(n, n);
  spec.t_corr = mimostats::exponential_correlation(n, alpha);
  spec.r_corr = mimostats::exponential_correlation(n, alpha);
  spec.snr_db = snr_db;
  spec.rice_k_db = k_db;
  return spec;
}

}  // namespace

TEST_CASE("exponential_correlation") {
  CHECK((mimostats::exponential_correlation(3, 0.0).mat() - ComplexMatrix::Identity(3, 3))
            .norm() == 0.0);

  const auto m = mimostats::exponential_correlation(2, 0.5);
  CHECK(m.mat()(0, 1).real() == doctest::Approx(0.5));
  CHECK(m.mat()(1, 0).real() == doctest::Approx(0.5));
  CHECK(m.trace() == doctest::Approx(2.0));

  CHECK_THROWS_AS(mimostats::exponential_correlation(4, 1.0), mimostats::InvalidAlphaError);
  CHECK_THROWS_AS(mimostats::exponential_correlation(4, -0.1), mimostats::InvalidAlphaError);
}

TEST_CASE("exponential_correlation is PD for alpha in [0,1) up to dim 64") {
  for (double alpha : {0.0, 0.3, 0.5, 0.9, 0.99}) {
    for (int dim : {2, 8, 64}) {
      const auto m = mimostats::exponential_correlation(dim, alpha);
      CHECK_NOTHROW(logdet_hpd(m));  // Cholesky succeeds <=> PD
      CHECK(m.trace() == doctest::Approx(static_cast<double>(dim)));
    }
  }
}

TEST_CASE("uniform_los") {
  CHECK(mimostats::uniform_los(1, 1)(0, 0) == std::complex<double>(1.0, 0.0));
  CHECK(mimostats::max_singular_value(mimostats::uniform_los(2, 2)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mimostats::uniform_los(4, 4).squaredNorm() == doctest::Approx(16.0));
}

TEST_CASE("normalize_spec scales the LOS matrix to the Rice factor") {
  // K = 1 (0 dB), n = 2: ||H_bar||^2 = 1 * Tr(R) * Tr(T) = 4.
  auto spec = normalize_spec(make_spec(2, 0.0, 0.0, 10.0));
  CHECK(spec.h_bar.squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));

  // K = 10 dB, n = 4: ||H_bar||^2 = 10 * 16 = 160.
  spec = normalize_spec(make_spec(4, 10.0, 0.0, 10.0));
  CHECK(spec.h_bar.squaredNorm() == doctest::Approx(160.0).epsilon(1e-12));
  CHECK(spec.t_corr.trace() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(spec.r_corr.trace() == doctest::Approx(4.0).epsilon(1e-12));

  // Rayleigh sentinel: K_dB = -inf zeroes the LOS exactly.
  spec = normalize_spec(make_spec(3, -kInf, 0.5, 0.0));
  CHECK(spec.h_bar.squaredNorm() == 0.0);
}

TEST_CASE("normalize_spec error paths") {
  auto spec = make_spec(2, 3.0, 0.0, 0.0);
  spec.h_bar = ComplexMatrix::Zero(2, 2);
  CHECK_THROWS_AS(normalize_spec(spec), mimostats::ZeroLosError);

  spec = make_spec(2, 3.0, 0.0, 0.0);
  spec.t_corr = HermitianMatrix::zero(2);
  CHECK_THROWS_AS(normalize_spec(spec), mimostats::ZeroTraceError);
}

TEST_CASE("normalize_spec is idempotent") {
  const auto once = normalize_spec(make_spec(4, 7.0, 0.5, 10.0));
  const auto twice = normalize_spec(once);
  CHECK((once.h_bar - twice.h_bar).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((once.t_corr.mat() - twice.t_corr.mat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((once.r_corr.mat() - twice.r_corr.mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scalar_covariance") {
  // SISO unit SNR Rayleigh: q = 1.
  auto spec = normalize_spec(make_spec(1, -kInf, 0.0, 0.0));
  CHECK(mimostats::scalar_covariance(spec).mat()(0, 0).real() == doctest::Approx(1.0));

  // rho = 10, K = 10, n_t = 4: q = 10/44.
  spec = normalize_spec(make_spec(4, 10.0, 0.0, 10.0));
  CHECK(mimostats::scalar_covariance(spec).mat()(0, 0).real() ==
        doctest::Approx(10.0 / 44.0).epsilon(1e-12));

  // Zero power.
  spec = normalize_spec(make_spec(2, 0.0, 0.0, -kInf));
  CHECK(mimostats::scalar_covariance(spec).mat().norm() == 0.0);
}

TEST_CASE("effective_channel") {
  const auto spec = normalize_spec(make_spec(4, 10.0, 0.5, 10.0));

  SUBCASE("identity covariance leaves the channel unchanged") {
    const auto eff = effective_channel(spec, HermitianMatrix::identity(4));
    CHECK((eff.h_tilde - spec.h_bar).norm() == 0.0);
    CHECK((eff.t_tilde.mat() - spec.t_corr.mat()).norm() == 0.0);
  }

  SUBCASE("zero covariance zeroes the channel") {
    const auto eff = effective_channel(spec, HermitianMatrix::zero(4));
    CHECK(eff.h_tilde.norm() == 0.0);
    CHECK(eff.t_tilde.mat().norm() == 0.0);
  }

  SUBCASE("scalar covariance is applied exactly") {
    const auto q = mimostats::scalar_covariance(spec);
    const double qval = q.mat()(0, 0).real();
    const auto eff = effective_channel(spec, q);
    CHECK((eff.t_tilde.mat() - qval * spec.t_corr.mat()).norm() == 0.0);
    // Tr(T~) = rho/(K+1) = 10/11 under the trace normalizations.
    CHECK(eff.t_tilde.trace() == doctest::Approx(10.0 / 11.0).epsilon(1e-9));
    // ||H~||^2 = K rho n_r / (K+1) = 10*10*4/11.
    CHECK(eff.h_tilde.squaredNorm() == doctest::Approx(400.0 / 11.0).epsilon(1e-9));
  }
}

TEST_CASE("received-power identity") {
  for (double alpha : {0.0, 0.5}) {
    for (double k_db : {-kInf, 0.0, 10.0}) {
      for (double snr_db : {0.0, 10.0, 17.0}) {
        const auto spec = normalize_spec(make_spec(3, k_db, alpha, snr_db));
        const auto eff = effective_channel(spec, mimostats::scalar_covariance(spec));
        const double rho = mimostats::db_to_linear(snr_db);
        const double lhs =
            eff.h_tilde.squaredNorm() + eff.r_corr.trace() * eff.t_tilde.trace();
        CHECK(lhs == doctest::Approx(rho * 3.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("gaussianity_diagnostics") {
  // Flat spectra give ratio 1 on both sides.
  ChannelSpec spec = make_spec(4, 0.0, 0.0, 10.0);
  auto eff = effective_channel(normalize_spec(spec), mimostats::scalar_covariance(normalize_spec(spec)));
  auto d = gaussianity_diagnostics(eff);
  CHECK(d.dom_r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.dom_t == doctest::Approx(1.0).epsilon(1e-12));

  // Rank-one R (all-ones scaled to trace 4): sigma_max = 4, Tr/n = 1.
  eff.r_corr = HermitianMatrix(ComplexMatrix::Ones(4, 4));
  d = gaussianity_diagnostics(eff);
  CHECK(d.dom_r == doctest::Approx(4.0).epsilon(1e-10));

  // Exponential alpha = 0.5 at dim 4 sits strictly between flat and dominant.
  eff.r_corr = mimostats::exponential_correlation(4, 0.5);
  d = gaussianity_diagnostics(eff);
  CHECK(d.dom_r > 1.0);
  CHECK(d.dom_r < 4.0);

  eff.t_tilde = HermitianMatrix::zero(4);
  CHECK_THROWS_AS(gaussianity_diagnostics(eff), mimostats::ZeroTraceError);
}
