// SPDX-License-Identifier: Apache-2.0
//
// Sweep driver: computes asymptotic mutual-information statistics across a
// parameter sweep, validates them against the Monte-Carlo estimator, and
// writes one CSV row per (axis value, SNR, outage epsilon).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimostats/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic Gaussian statistics of Rician MIMO mutual information"};

  std::string config_path;
  std::string sweep_axis;
  std::string out_path;
  std::string units = "nats";
  long long trials = -1;
  long long seed = -1;
  int workers = -1;
  bool no_mc = false;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON config file (defaults are the baseline scenario)");
  app.add_option("--sweep", sweep_axis,
                 "Sweep axis: antennas|tx_rx_ratio|rice_k_db|alpha|snr_db");
  app.add_option("--trials", trials, "Monte-Carlo trials per cell");
  app.add_option("--seed", seed, "Monte-Carlo master seed");
  app.add_option("--out", out_path, "Output CSV path");
  app.add_option("--units", units, "Presentation units for the printed report: nats|bits")
      ->check(CLI::IsMember({"nats", "bits"}));
  app.add_flag("--no-mc", no_mc, "Analytic-only fast mode (skip Monte-Carlo columns)");
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  app.add_flag("--print-config", print_config, "Print the effective config as JSON and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    mimostats::SweepConfig cfg =
        config_path.empty() ? mimostats::default_config() : mimostats::load_config(config_path);
    if (!sweep_axis.empty()) cfg.axis = mimostats::sweep_axis_from_string(sweep_axis);
    if (trials >= 0) cfg.mc.trials = trials;
    if (seed >= 0) cfg.mc.master_seed = static_cast<std::uint64_t>(seed);
    if (!out_path.empty()) cfg.output_path = out_path;
    if (workers >= 0) cfg.workers = workers;
    if (no_mc) cfg.run_mc = false;

    if (print_config) {
      std::cout << mimostats::config_to_json(cfg);
      return 0;
    }

    const mimostats::SweepReport report = mimostats::run_sweep(cfg);
    const mimostats::ErrorSummary summary = mimostats::report_errors(report);

    const double unit_div = units == "bits" ? std::log(2.0) : 1.0;
    double mu_lo = std::numeric_limits<double>::infinity();
    double mu_hi = -mu_lo;
    int negative_outage = 0;
    for (const auto& r : report.rows) {
      if (r.failed) continue;
      mu_lo = std::min(mu_lo, r.mu_nats / unit_div);
      mu_hi = std::max(mu_hi, r.mu_nats / unit_div);
      if (r.outage_analytic_nats < 0.0) ++negative_outage;
      if (!r.warn.empty()) {
        std::cerr << "warning: " << r.axis_name << "=" << r.axis_value << " snr=" << r.snr_db
                  << " dB: " << r.warn << "\n";
      }
    }

    std::cout << "wrote " << report.rows.size() << " rows to " << report.csv_path << "\n";
    if (std::isfinite(mu_lo)) {
      std::cout << "ergodic mutual information range: [" << mu_lo << ", " << mu_hi << "] "
                << units << "/complex dimension\n";
    }
    if (negative_outage > 0) {
      std::cout << "note: " << negative_outage << " row(s) have a negative Gaussian outage "
                << "approximation (clamp to 0 for display; the CSV keeps the raw value)\n";
    }
    if (cfg.run_mc) {
      std::cout << format_summary(summary);
    }

    if (!report.row_errors.empty()) {
      nlohmann::json errs = report.row_errors;
      std::cerr << errs.dump() << "\n";
      return 1;
    }
    return 0;
  } catch (const mimostats::Error& e) {
    nlohmann::json errs = {std::string("fatal: ") + e.what()};
    std::cerr << errs.dump() << "\n";
    return 2;
  }
}
