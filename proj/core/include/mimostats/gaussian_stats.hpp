// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "mimostats/replica_solver.hpp"

namespace mimostats {

/// An outage question: the target outage probability, and optionally a rate
/// whose outage probability is wanted as well.
struct OutageQuery {
  double epsilon = 0.1;  // in (0, 1)
  std::optional<double> rate_nats;
};

struct OutageAnswer {
  double rate_nats = 0.0;                 // I_eps
  std::optional<double> outage_probability;  // P(I < rate), when a rate was asked
};

/// Upper-tail standard normal probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Inverse of q_function on (0, 1); monotone decreasing in p.
double q_inverse(double p);

/// Gaussian outage rate I_eps = mu - sigma * Q^{-1}(eps) in nats. May be
/// negative at extreme eps / low SNR; returned as-is.
double outage_rate(const AsymptoticStats& stats, double epsilon);

/// P(N(mu, sigma^2) < rate) = Q((mu - rate)/sigma); degenerates to the
/// indicator rate > mu when sigma = 0.
double outage_probability(const AsymptoticStats& stats, double rate_nats);

/// Answers a query in one call: the eps-outage rate, plus the outage
/// probability of query.rate_nats when given.
OutageAnswer evaluate_outage(const AsymptoticStats& stats, const OutageQuery& query);

}  // namespace mimostats
