// SPDX-License-Identifier: Apache-2.0
#include "mimostats/gaussian_stats.hpp"

#include <cmath>
#include <string>

namespace mimostats {

double q_function(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

namespace {

// Acklam's rational approximation to the standard normal quantile,
// accurate to ~1.1e-9; polished below by Newton steps on Q itself.
double norm_quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw OutOfRangeError("q_inverse: p = " + std::to_string(p) + " outside (0, 1)");
  }
  // Q(x) = p  <=>  x = Phi^{-1}(1 - p) = -Phi^{-1}(p)
  double x = -norm_quantile_estimate(p);
  for (int it = 0; it < 3; ++it) {
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x += (q_function(x) - p) / pdf;
  }
  return x;
}

double outage_rate(const AsymptoticStats& stats, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw OutOfRangeError("outage_rate: epsilon outside (0, 1)");
  }
  const double sigma = std::sqrt(stats.variance_nats2);
  if (sigma == 0.0) {
    return stats.mean_nats;
  }
  return stats.mean_nats - sigma * q_inverse(epsilon);
}

double outage_probability(const AsymptoticStats& stats, double rate_nats) {
  const double sigma = std::sqrt(stats.variance_nats2);
  if (sigma == 0.0) {
    return rate_nats > stats.mean_nats ? 1.0 : 0.0;
  }
  return q_function((stats.mean_nats - rate_nats) / sigma);
}

OutageAnswer evaluate_outage(const AsymptoticStats& stats, const OutageQuery& query) {
  OutageAnswer answer;
  answer.rate_nats = outage_rate(stats, query.epsilon);
  if (query.rate_nats) {
    answer.outage_probability = outage_probability(stats, *query.rate_nats);
  }
  return answer;
}

}  // namespace mimostats
