// SPDX-License-Identifier: Apache-2.0
#include "mimostats/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

namespace mimostats {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t trial_key(std::uint64_t master_seed, std::int64_t trial) {
  return mix64(master_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(trial) + 1));
}

namespace {

// Value j of the stream keyed by k (counter-based: no state to carry).
inline std::uint64_t stream_u64(std::uint64_t key, std::uint64_t j) {
  return mix64(key + 0xD1B54A32D192ED03ull * (j + 1));
}

// (0, 1]: the +1 keeps log() finite at the bottom end.
inline double u01(std::uint64_t r) {
  return static_cast<double>((r >> 11) + 1) * 0x1.0p-53;
}

// CN(0, 1): magnitude^2 ~ Exp(1), phase uniform. Equivalent to a Box-Muller
// pair scaled so real and imaginary parts each have variance 1/2.
inline std::complex<double> complex_normal(std::uint64_t key, std::uint64_t entry) {
  const double u1 = u01(stream_u64(key, 2 * entry));
  const double u2 = u01(stream_u64(key, 2 * entry + 1));
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

ComplexMatrix draw_hw(std::uint64_t key, Eigen::Index n_r, Eigen::Index n_t) {
  ComplexMatrix hw(n_r, n_t);
  std::uint64_t entry = 0;
  for (Eigen::Index i = 0; i < n_r; ++i) {
    for (Eigen::Index j = 0; j < n_t; ++j) {
      hw(i, j) = complex_normal(key, entry++);
    }
  }
  return hw;
}

}  // namespace

ChannelSampler::ChannelSampler(const ChannelSpec& spec)
    : h_bar_(spec.h_bar),
      sqrt_r_(hermitian_sqrt(spec.r_corr).mat()),
      sqrt_t_(hermitian_sqrt(spec.t_corr).mat()) {}

ComplexMatrix ChannelSampler::sample(std::uint64_t key) const {
  const ComplexMatrix hw = draw_hw(key, h_bar_.rows(), h_bar_.cols());
  return h_bar_ + sqrt_r_ * hw * sqrt_t_;
}

ComplexMatrix sample_channel(const ChannelSpec& spec, std::uint64_t seed) {
  return ChannelSampler(spec).sample(seed);
}

double mutual_information(const ComplexMatrix& h, const HermitianMatrix& q) {
  ComplexMatrix g = h * q.mat() * h.adjoint();
  g.diagonal().array() += 1.0;
  return logdet_hpd(HermitianMatrix(0.5 * (g + g.adjoint().eval())));
}

namespace {

struct WelfordAcc {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const WelfordAcc& o) {
    if (o.n == 0) return;
    const double d = o.mean - mean;
    const std::int64_t total = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(total);
    n = total;
  }
};

constexpr std::int64_t kRetainMax = 10'000'000;

}  // namespace

McEstimate estimate(const ChannelSpec& spec, const HermitianMatrix& q, const McConfig& cfg,
                    const std::vector<double>& quantile_probs, int workers) {
  if (cfg.trials < 1) {
    throw OutOfRangeError("estimate: trials must be >= 1");
  }
  for (double p : quantile_probs) {
    if (!(p > 0.0 && p < 1.0)) {
      throw OutOfRangeError("estimate: quantile probability outside (0, 1)");
    }
  }
  const ChannelSampler sampler(spec);
  const std::int64_t trials = cfg.trials;
  const std::int64_t chunk = std::max<std::int64_t>(cfg.batch, 1);
  const std::int64_t n_chunks = (trials + chunk - 1) / chunk;
  const std::int64_t stride = (trials + kRetainMax - 1) / kRetainMax;  // 1 unless huge
  const std::int64_t retained = (trials + stride - 1) / stride;

  std::vector<WelfordAcc> chunk_acc(static_cast<std::size_t>(n_chunks));
  std::vector<double> samples(static_cast<std::size_t>(retained));

  int n_workers = workers > 0 ? workers
                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_workers = static_cast<int>(std::min<std::int64_t>(n_workers, n_chunks));

  std::atomic<std::int64_t> next_chunk{0};
  auto worker_fn = [&]() {
    for (;;) {
      const std::int64_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) break;
      const std::int64_t begin = c * chunk;
      const std::int64_t end = std::min(begin + chunk, trials);
      WelfordAcc acc;
      for (std::int64_t i = begin; i < end; ++i) {
        const ComplexMatrix h = sampler.sample(trial_key(cfg.master_seed, i));
        const double mi = mutual_information(h, q);
        acc.add(mi);
        if (i % stride == 0) {
          samples[static_cast<std::size_t>(i / stride)] = mi;
        }
      }
      chunk_acc[static_cast<std::size_t>(c)] = acc;
    }
  };

  if (n_workers <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  // Merge in chunk order: the reduction result is independent of which
  // worker ran which chunk.
  WelfordAcc total;
  for (const auto& acc : chunk_acc) total.merge(acc);

  McEstimate est;
  est.trials = trials;
  est.master_seed = cfg.master_seed;
  est.mean_nats = total.mean;
  est.var_nats2 = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
  est.stderr_mean = std::sqrt(est.var_nats2 / static_cast<double>(total.n));

  if (!quantile_probs.empty()) {
    std::sort(samples.begin(), samples.end());
    const auto m = static_cast<double>(samples.size());
    for (double p : quantile_probs) {
      auto k = static_cast<std::int64_t>(std::ceil(p * m));  // 1-based order statistic
      k = std::clamp<std::int64_t>(k, 1, static_cast<std::int64_t>(samples.size()));
      est.quantiles[p] = samples[static_cast<std::size_t>(k - 1)];
    }
  }
  return est;
}

double empirical_outage(const McEstimate& est, double epsilon) {
  for (const auto& [p, v] : est.quantiles) {
    if (std::abs(p - epsilon) <= 1e-12) {
      return v;
    }
  }
  throw MissingQuantileError("empirical_outage: quantile " + std::to_string(epsilon) +
                             " was not estimated");
}

}  // namespace mimostats
