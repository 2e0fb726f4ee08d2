// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mimostats/monte_carlo.hpp"

namespace mimostats {

enum class SweepAxis { antennas, tx_rx_ratio, rice_k_db, alpha, snr_db };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// Scenario template; the swept axis overrides the matching field per row.
/// The LOS matrix is the all-ones (rank one) profile and both correlation
/// matrices are exponential with the common base alpha.
struct ScenarioTemplate {
  int n_t = 4;
  int n_r = 4;
  double k_db = 10.0;
  double alpha = 0.0;
};

struct SweepConfig {
  ScenarioTemplate scenario;
  SweepAxis axis = SweepAxis::antennas;
  std::vector<double> axis_values = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> snr_grid_db = {0.0, 10.0, 20.0, 30.0};
  std::vector<double> outage_epsilons = {0.1};
  McConfig mc;
  std::string output_path = "sweep.csv";
  bool run_mc = true;
  int workers = 0;
};

/// One CSV row: a (axis value, SNR, epsilon) cell. Monte-Carlo columns are
/// shared across the epsilons of a cell; mc_quantile is the epsilon-quantile.
struct SweepRow {
  std::string axis_name;
  double axis_value = 0.0;
  int n_t = 0;
  int n_r = 0;
  double k_db = 0.0;
  double alpha = 0.0;
  double snr_db = 0.0;
  bool failed = false;
  bool has_mc = false;
  double w = 0.0, z = 0.0;
  double mu_nats = 0.0, sigma_nats = 0.0;
  double gamma = 0.0, stability_margin = 0.0;
  double outage_eps = 0.0, outage_analytic_nats = 0.0;
  double mc_mean = 0.0, mc_stderr = 0.0, mc_std = 0.0, mc_quantile = 0.0;
  double rel_err_mean = 0.0, rel_err_std = 0.0, rel_err_outage = 0.0;
  double dom_r = 0.0, dom_t = 0.0;
  std::string warn;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<std::string> row_errors;  // machine-readable "axis=..,snr=..: what"
  std::string csv_path;
};

/// Builds the default (baseline) configuration.
SweepConfig default_config();

/// Parses a JSON config document; missing fields keep their defaults.
/// Throws ConfigError with field context on malformed input.
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);
std::string config_to_json(const SweepConfig& cfg);

/// Runs the sweep and writes the CSV to cfg.output_path. Rows appear in
/// (axis value, SNR, epsilon) order; per-row failures are recorded in the
/// warn column and in row_errors instead of aborting the sweep. Output is a
/// deterministic function of the config (worker count never changes bytes).
SweepReport run_sweep(const SweepConfig& cfg);

struct MetricErrors {
  double max_rel_err = 0.0;
  double median_rel_err = 0.0;
  int rows = 0;
};

struct ErrorSummary {
  MetricErrors mean;
  MetricErrors stdev;
  MetricErrors outage;
  int failed_rows = 0;
};

/// Aggregates relative errors across the report and writes
/// "<csv_path>.summary.json" alongside the CSV.
ErrorSummary report_errors(const SweepReport& report);

/// Human-readable rendering of the summary (relative errors are unitless).
std::string format_summary(const ErrorSummary& summary);

/// The exact CSV header, exposed for schema tests.
std::string csv_header();

}  // namespace mimostats
