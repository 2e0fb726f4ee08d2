// SPDX-License-Identifier: Apache-2.0
#include "mimostats/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mimostats/gaussian_stats.hpp"
#include "mimostats/replica_solver.hpp"

namespace mimostats {

using nlohmann::json;

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::antennas: return "antennas";
    case SweepAxis::tx_rx_ratio: return "tx_rx_ratio";
    case SweepAxis::rice_k_db: return "rice_k_db";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::snr_db: return "snr_db";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "antennas") return SweepAxis::antennas;
  if (name == "tx_rx_ratio") return SweepAxis::tx_rx_ratio;
  if (name == "rice_k_db") return SweepAxis::rice_k_db;
  if (name == "alpha") return SweepAxis::alpha;
  if (name == "snr_db") return SweepAxis::snr_db;
  throw ConfigError("unknown sweep axis '" + name +
                    "' (expected antennas|tx_rx_ratio|rice_k_db|alpha|snr_db)");
}

SweepConfig default_config() { return SweepConfig{}; }

namespace {

double parse_db_value(const json& v, const std::string& field) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError(field + ": expected a number or \"-inf\", got \"" + s + "\"");
  }
  if (!v.is_number()) {
    throw ConfigError(field + ": expected a number");
  }
  return v.get<double>();
}

template <typename T>
T get_or(const json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

}  // namespace

SweepConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  SweepConfig cfg;
  if (j.contains("scenario")) {
    const json& s = j.at("scenario");
    cfg.scenario.n_t = get_or<int>(s, "n_t", cfg.scenario.n_t);
    cfg.scenario.n_r = get_or<int>(s, "n_r", cfg.scenario.n_r);
    if (s.contains("k_db")) cfg.scenario.k_db = parse_db_value(s.at("k_db"), "scenario.k_db");
    cfg.scenario.alpha = get_or<double>(s, "alpha", cfg.scenario.alpha);
  }
  if (j.contains("sweep_axis")) {
    cfg.axis = sweep_axis_from_string(get_or<std::string>(j, "sweep_axis", "antennas"));
  }
  if (j.contains("axis_values")) {
    cfg.axis_values.clear();
    for (const auto& v : j.at("axis_values")) {
      cfg.axis_values.push_back(parse_db_value(v, "axis_values"));
    }
  }
  cfg.snr_grid_db = get_or<std::vector<double>>(j, "snr_grid_db", cfg.snr_grid_db);
  cfg.outage_epsilons = get_or<std::vector<double>>(j, "outage_epsilons", cfg.outage_epsilons);
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    cfg.mc.trials = get_or<std::int64_t>(m, "trials", cfg.mc.trials);
    cfg.mc.master_seed = get_or<std::uint64_t>(m, "seed", cfg.mc.master_seed);
    cfg.mc.batch = get_or<std::int64_t>(m, "batch", cfg.mc.batch);
  }
  cfg.output_path = get_or<std::string>(j, "output_path", cfg.output_path);
  cfg.run_mc = get_or<bool>(j, "run_mc", cfg.run_mc);
  cfg.workers = get_or<int>(j, "workers", cfg.workers);

  if (cfg.scenario.n_t < 1 || cfg.scenario.n_r < 1) {
    throw ConfigError("scenario.n_t / scenario.n_r must be >= 1");
  }
  if (cfg.axis_values.empty()) {
    throw ConfigError("axis_values must be nonempty");
  }
  if (!std::is_sorted(cfg.axis_values.begin(), cfg.axis_values.end())) {
    throw ConfigError("axis_values must be sorted ascending");
  }
  if (cfg.snr_grid_db.empty() && cfg.axis != SweepAxis::snr_db) {
    throw ConfigError("snr_grid_db must be nonempty");
  }
  for (double e : cfg.outage_epsilons) {
    if (!(e > 0.0 && e < 1.0)) {
      throw ConfigError("outage_epsilons entries must lie in (0, 1)");
    }
  }
  if (cfg.mc.trials < 1) {
    throw ConfigError("mc.trials must be >= 1");
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

// JSON has no -inf literal; the schema spells it "-inf".
json db_value_to_json(double v) {
  if (std::isinf(v) && v < 0) return json("-inf");
  return json(v);
}

}  // namespace

std::string config_to_json(const SweepConfig& cfg) {
  json j;
  j["scenario"] = {{"n_t", cfg.scenario.n_t},
                   {"n_r", cfg.scenario.n_r},
                   {"k_db", db_value_to_json(cfg.scenario.k_db)},
                   {"alpha", cfg.scenario.alpha}};
  j["sweep_axis"] = to_string(cfg.axis);
  j["axis_values"] = json::array();
  for (double v : cfg.axis_values) j["axis_values"].push_back(db_value_to_json(v));
  j["snr_grid_db"] = cfg.snr_grid_db;
  j["outage_epsilons"] = cfg.outage_epsilons;
  j["mc"] = {{"trials", cfg.mc.trials}, {"seed", cfg.mc.master_seed}, {"batch", cfg.mc.batch}};
  j["output_path"] = cfg.output_path;
  j["run_mc"] = cfg.run_mc;
  j["workers"] = cfg.workers;
  return j.dump(2) + "\n";
}

std::string csv_header() {
  return "axis_name,axis_value,n_t,n_r,k_db,alpha,snr_db,w,z,mu_nats,sigma_nats,gamma,"
         "stability_margin,outage_eps,outage_analytic_nats,mc_mean,mc_stderr,mc_std,"
         "mc_quantile,rel_err_mean,rel_err_std,rel_err_outage,dom_r,dom_t,warn";
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Dominance ratios at >= 80% of their maximum (the dimension) get flagged.
std::string warn_text(const DominanceRatios& d, int n_r, int n_t) {
  std::string w;
  if (d.dom_r >= 0.8 * n_r && n_r > 1) w += "dominant_rx_eigenmode;";
  if (d.dom_t >= 0.8 * n_t && n_t > 1) w += "dominant_tx_eigenmode;";
  return w;
}

struct CellResult {
  ChannelSpec spec;
  FixedPoint fp;
  AsymptoticStats stats;
  DominanceRatios diag;
  McEstimate mc;
  bool has_mc = false;
};

CellResult compute_cell(int n_t, int n_r, double k_db, double alpha, double snr_db,
                        const SweepConfig& cfg) {
  CellResult cell;
  ChannelSpec spec;
  spec.n_t = n_t;
  spec.n_r = n_r;
  spec.h_bar = uniform_los(n_r, n_t);
  spec.t_corr = exponential_correlation(n_t, alpha);
  spec.r_corr = exponential_correlation(n_r, alpha);
  spec.snr_db = snr_db;
  spec.rice_k_db = k_db;
  cell.spec = normalize_spec(spec);

  const HermitianMatrix q = scalar_covariance(cell.spec);
  const EffectiveChannel eff = effective_channel(cell.spec, q);
  cell.fp = solve_fixed_point(eff);
  cell.stats = asymptotic_stats(eff, cell.fp);
  cell.diag = gaussianity_diagnostics(eff);
  if (cfg.run_mc) {
    cell.mc = estimate(cell.spec, q, cfg.mc, cfg.outage_epsilons, cfg.workers);
    cell.has_mc = true;
  }
  return cell;
}

void write_row(std::ostream& os, const SweepRow& r) {
  os << r.axis_name << ',' << fmt(r.axis_value) << ',' << r.n_t << ',' << r.n_r << ','
     << fmt(r.k_db) << ',' << fmt(r.alpha) << ',' << fmt(r.snr_db) << ',';
  if (r.failed) {
    os << ",,,,,,,,,,,,,,,,,";  // w .. dom_t all blank
  } else {
    os << fmt(r.w) << ',' << fmt(r.z) << ',' << fmt(r.mu_nats) << ',' << fmt(r.sigma_nats) << ','
       << fmt(r.gamma) << ',' << fmt(r.stability_margin) << ',' << fmt(r.outage_eps) << ','
       << fmt(r.outage_analytic_nats) << ',';
    if (r.has_mc) {
      os << fmt(r.mc_mean) << ',' << fmt(r.mc_stderr) << ',' << fmt(r.mc_std) << ','
         << fmt(r.mc_quantile) << ',' << fmt(r.rel_err_mean) << ',' << fmt(r.rel_err_std) << ','
         << fmt(r.rel_err_outage) << ',';
    } else {
      os << ",,,,,,,";
    }
    os << fmt(r.dom_r) << ',' << fmt(r.dom_t) << ',';
  }
  os << r.warn << '\n';
}

}  // namespace

SweepReport run_sweep(const SweepConfig& cfg) {
  SweepReport report;
  report.csv_path = cfg.output_path;
  const std::string axis_name = to_string(cfg.axis);

  for (double v : cfg.axis_values) {
    int n_t = cfg.scenario.n_t;
    int n_r = cfg.scenario.n_r;
    double k_db = cfg.scenario.k_db;
    double alpha = cfg.scenario.alpha;
    std::vector<double> snrs = cfg.snr_grid_db;
    switch (cfg.axis) {
      case SweepAxis::antennas:
        n_t = n_r = static_cast<int>(std::lround(v));
        break;
      case SweepAxis::tx_rx_ratio:
        n_t = static_cast<int>(std::lround(v));
        break;
      case SweepAxis::rice_k_db:
        k_db = v;
        break;
      case SweepAxis::alpha:
        alpha = v;
        break;
      case SweepAxis::snr_db:
        snrs = {v};
        break;
    }

    for (double snr : snrs) {
      SweepRow base;
      base.axis_name = axis_name;
      base.axis_value = v;
      base.n_t = n_t;
      base.n_r = n_r;
      base.k_db = k_db;
      base.alpha = alpha;
      base.snr_db = snr;

      try {
        const CellResult cell = compute_cell(n_t, n_r, k_db, alpha, snr, cfg);
        base.w = cell.fp.w;
        base.z = cell.fp.z;
        base.mu_nats = cell.stats.mean_nats;
        base.sigma_nats = std::sqrt(cell.stats.variance_nats2);
        base.gamma = cell.stats.gamma;
        base.stability_margin = cell.stats.stability_margin;
        base.dom_r = cell.diag.dom_r;
        base.dom_t = cell.diag.dom_t;
        base.warn = warn_text(cell.diag, n_r, n_t);
        base.has_mc = cell.has_mc;
        if (cell.has_mc) {
          base.mc_mean = cell.mc.mean_nats;
          base.mc_stderr = cell.mc.stderr_mean;
          base.mc_std = std::sqrt(cell.mc.var_nats2);
          base.rel_err_mean = std::abs(base.mu_nats - base.mc_mean) / std::abs(base.mc_mean);
          base.rel_err_std = std::abs(base.sigma_nats - base.mc_std) / base.mc_std;
        }
        for (double eps : cfg.outage_epsilons) {
          SweepRow row = base;
          row.outage_eps = eps;
          row.outage_analytic_nats = outage_rate(cell.stats, eps);
          if (cell.has_mc) {
            row.mc_quantile = empirical_outage(cell.mc, eps);
            row.rel_err_outage =
                std::abs(row.outage_analytic_nats - row.mc_quantile) / std::abs(row.mc_quantile);
          }
          report.rows.push_back(std::move(row));
        }
      } catch (const Error& e) {
        base.failed = true;
        base.warn = std::string("failed:") + e.what();
        std::ostringstream ctx;
        ctx << "axis=" << axis_name << " value=" << v << " snr_db=" << snr << ": " << e.what();
        report.row_errors.push_back(ctx.str());
        for (double eps : cfg.outage_epsilons) {
          SweepRow row = base;
          row.outage_eps = eps;
          report.rows.push_back(std::move(row));
        }
      }
    }
  }

  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output path: " + cfg.output_path);
  }
  out << csv_header() << '\n';
  for (const auto& row : report.rows) {
    write_row(out, row);
  }
  return report;
}

namespace {

MetricErrors summarize(std::vector<double> values) {
  MetricErrors m;
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double x) { return !std::isfinite(x); }),
               values.end());
  m.rows = static_cast<int>(values.size());
  if (values.empty()) return m;
  std::sort(values.begin(), values.end());
  m.max_rel_err = values.back();
  m.median_rel_err = values[values.size() / 2];
  return m;
}

}  // namespace

ErrorSummary report_errors(const SweepReport& report) {
  ErrorSummary s;
  std::vector<double> em, es, eo;
  for (const auto& r : report.rows) {
    if (r.failed) {
      ++s.failed_rows;
      continue;
    }
    if (r.has_mc) {
      em.push_back(r.rel_err_mean);
      es.push_back(r.rel_err_std);
      eo.push_back(r.rel_err_outage);
    }
  }
  s.mean = summarize(std::move(em));
  s.stdev = summarize(std::move(es));
  s.outage = summarize(std::move(eo));

  json j;
  j["mean"] = {{"max_rel_err", s.mean.max_rel_err},
               {"median_rel_err", s.mean.median_rel_err},
               {"rows", s.mean.rows}};
  j["stdev"] = {{"max_rel_err", s.stdev.max_rel_err},
                {"median_rel_err", s.stdev.median_rel_err},
                {"rows", s.stdev.rows}};
  j["outage"] = {{"max_rel_err", s.outage.max_rel_err},
                 {"median_rel_err", s.outage.median_rel_err},
                 {"rows", s.outage.rows}};
  j["failed_rows"] = s.failed_rows;
  std::ofstream out(report.csv_path + ".summary.json", std::ios::binary);
  if (out) {
    out << j.dump(2) << '\n';
  }
  return s;
}

std::string format_summary(const ErrorSummary& s) {
  std::ostringstream os;
  os << "metric   rows  max_rel_err  median_rel_err\n";
  auto line = [&](const char* name, const MetricErrors& m) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-8s %4d  %10.4g%%  %12.4g%%\n", name, m.rows,
                  100.0 * m.max_rel_err, 100.0 * m.median_rel_err);
    os << buf;
  };
  line("mean", s.mean);
  line("stdev", s.stdev);
  line("outage", s.outage);
  if (s.failed_rows > 0) {
    os << "failed rows: " << s.failed_rows << '\n';
  }
  return os.str();
}

}  // namespace mimostats
