// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mimostats/channel_model.hpp"

namespace mimostats {

struct McConfig {
  std::int64_t trials = 1'000'000;
  std::uint64_t master_seed = 1;
  std::int64_t batch = 4096;  // internal batching hint (chunk size)
};

/// Empirical mutual-information statistics. quantiles maps probability to
/// the type-1 (lower order statistic) empirical quantile in nats.
struct McEstimate {
  double mean_nats = 0.0;
  double var_nats2 = 0.0;
  double stderr_mean = 0.0;
  std::map<double, double> quantiles;
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
};

/// 64-bit finalizer (splitmix64-style); the basis of all randomness here.
std::uint64_t mix64(std::uint64_t x);

/// Key of trial i under a master seed. All randomness of trial i derives
/// from this key alone, so results do not depend on execution order.
std::uint64_t trial_key(std::uint64_t master_seed, std::int64_t trial);

/// Draws H = H_bar + R^{1/2} H_w T^{1/2} with iid CN(0,1) entries in H_w.
/// The square roots are recomputed per call; estimate() uses the cached
/// sampler below. seed is the per-trial key (see trial_key).
ComplexMatrix sample_channel(const ChannelSpec& spec, std::uint64_t seed);

/// Precomputes the correlation square roots of a normalized spec.
class ChannelSampler {
 public:
  explicit ChannelSampler(const ChannelSpec& spec);
  ComplexMatrix sample(std::uint64_t key) const;

 private:
  ComplexMatrix h_bar_;
  ComplexMatrix sqrt_r_;
  ComplexMatrix sqrt_t_;
};

/// I(H) = ln det(I + H Q H^H) in nats.
double mutual_information(const ComplexMatrix& h, const HermitianMatrix& q);

/// Streams cfg.trials channel draws, accumulating mean/variance with
/// numerically stable one-pass updates and retaining samples for quantiles
/// (all of them up to 10^7 trials; past that, a deterministic stride
/// subsample, which of iid draws is itself iid). The result is a function of
/// (spec, q, cfg, quantile_probs) only; the worker count changes wall time,
/// never bits. workers <= 0 selects the hardware concurrency.
McEstimate estimate(const ChannelSpec& spec, const HermitianMatrix& q, const McConfig& cfg,
                    const std::vector<double>& quantile_probs, int workers = 0);

/// The epsilon-quantile recorded in est; epsilon must be one of the
/// estimated probabilities.
double empirical_outage(const McEstimate& est, double epsilon);

}  // namespace mimostats
