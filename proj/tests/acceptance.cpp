// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits with the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mimostats/capacity_optimizer.hpp"
#include "mimostats/gaussian_stats.hpp"
#include "mimostats/monte_carlo.hpp"
#include "mimostats/replica_solver.hpp"
#include "mimostats/sweep.hpp"

using namespace mimostats;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChannelSpec baseline_spec(int n_t, int n_r, double k_db, double alpha, double snr_db) {
  ChannelSpec spec;
  spec.n_t = n_t;
  spec.n_r = n_r;
  spec.h_bar = uniform_los(n_r, n_t);
  spec.t_corr = exponential_correlation(n_t, alpha);
  spec.r_corr = exponential_correlation(n_r, alpha);
  spec.snr_db = snr_db;
  spec.rice_k_db = k_db;
  return normalize_spec(spec);
}

EffectiveChannel baseline_eff(int n, double k_db, double alpha, double snr_db) {
  const auto spec = baseline_spec(n, n, k_db, alpha, snr_db);
  return effective_channel(spec, scalar_covariance(spec));
}

struct Criterion {
  int id;
  std::string detail;
  bool pass = true;
  double seconds = 0.0;

  void fail(const std::string& why) {
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& what) {
    if (pass && detail.empty()) detail = what;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. SISO Rayleigh closed form.
void criterion1(Criterion& c) {
  double max_dev = 0.0;
  for (double rho : {0.5, 1.0, 3.0, 10.0}) {
    EffectiveChannel eff;
    eff.h_tilde = ComplexMatrix::Zero(1, 1);
    eff.t_tilde = HermitianMatrix(rho * ComplexMatrix::Identity(1, 1));
    eff.r_corr = HermitianMatrix::identity(1);

    const double w_ref = (-1.0 + std::sqrt(1.0 + 4.0 * rho)) / 2.0;
    const double z_ref = 1.0 / (1.0 + w_ref);
    const double mu_ref = 2.0 * std::log(1.0 + w_ref) - w_ref * z_ref;

    const auto fp = solve_fixed_point(eff);
    const auto st = asymptotic_stats(eff, fp);
    max_dev = std::max({max_dev, std::abs(fp.w - w_ref), std::abs(fp.z - z_ref),
                        std::abs(st.mean_nats - mu_ref)});
    if (std::abs(fp.w - w_ref) > 1e-10) c.fail("w off at rho=" + fmt(rho));
    if (std::abs(fp.z - z_ref) > 1e-10) c.fail("z off at rho=" + fmt(rho));
    if (std::abs(st.mean_nats - mu_ref) > 1e-10) c.fail("mu off at rho=" + fmt(rho));
  }
  c.note("max deviation " + fmt(max_dev));
}

// ---------------------------------------------------------------------------
// 2 + 3. Randomized family: solver cross-agreement, stability inequality and
// the two-route gamma check.
struct FamilyInstance {
  EffectiveChannel eff;
  FixedPoint fp;
};

void criteria23(Criterion& c2, Criterion& c3, std::vector<FamilyInstance>& family) {
  std::mt19937_64 rng(20260809);
  std::uniform_int_distribution<int> dim(1, 16);
  const double k_dbs[] = {-kInf, 0.0, 10.0};
  const double alphas[] = {0.0, 0.5, 0.9};
  const double snr_dbs[] = {-10.0, 0.0, 10.0, 20.0};  // rho in {0.1, 1, 10, 100}

  double max_wz_dev = 0.0, max_gamma_dev = 0.0;
  double margin_lo = 1.0, margin_hi = 0.0;
  int count = 0;
  for (int rep = 0; rep < 6; ++rep) {
    for (double k_db : k_dbs) {
      for (double alpha : alphas) {
        for (double snr_db : snr_dbs) {
          const int n = dim(rng);
          const auto eff = baseline_eff(n, k_db, alpha, snr_db);
          const auto fa = solve_fixed_point(eff);
          const auto fb = solve_fixed_point_bisection(eff);
          const double dev = std::max(std::abs(fa.w - fb.w), std::abs(fa.z - fb.z));
          max_wz_dev = std::max(max_wz_dev, dev);
          if (dev > 1e-10) {
            c2.fail("methods disagree by " + fmt(dev) + " at n=" + std::to_string(n) +
                    " K_dB=" + fmt(k_db) + " alpha=" + fmt(alpha) + " snr=" + fmt(snr_db));
          }

          const auto st = asymptotic_stats(eff, fa);
          margin_lo = std::min(margin_lo, st.stability_margin);
          margin_hi = std::max(margin_hi, st.stability_margin);
          if (!(st.stability_margin > 0.0 && st.stability_margin < 1.0)) {
            c3.fail("margin " + fmt(st.stability_margin) + " outside (0,1) at n=" +
                    std::to_string(n) + " K_dB=" + fmt(k_db) + " snr=" + fmt(snr_db));
          }
          const auto rs = resolvents(eff, fa.w, fa.z);
          const double gdev = std::abs(gamma_trace_form(eff, rs, fa.w) - st.gamma);
          max_gamma_dev = std::max(max_gamma_dev, gdev);
          if (gdev > 1e-10) {
            c3.fail("gamma routes differ by " + fmt(gdev));
          }
          family.push_back({eff, fa});
          ++count;
        }
      }
    }
  }
  c2.note(std::to_string(count) + " channels, max |w,z| deviation " + fmt(max_wz_dev));
  c3.note("margin range [" + fmt(margin_lo) + ", " + fmt(margin_hi) + "], max gamma dev " +
          fmt(max_gamma_dev));
}

// ---------------------------------------------------------------------------
// 4 + 5 + 6 + 9. Baseline Monte-Carlo grid.
struct GridCell {
  int n;
  double snr_db;
  AsymptoticStats st;
  McEstimate mc;
};

void criteria4569(Criterion& c4, Criterion& c5, Criterion& c6, Criterion& c9) {
  const std::int64_t trials = 1'000'000;
  std::vector<GridCell> grid;
  for (int n : {2, 4, 8}) {
    for (double snr_db : {0.0, 10.0, 20.0, 30.0}) {
      GridCell cell;
      cell.n = n;
      cell.snr_db = snr_db;
      const auto spec = baseline_spec(n, n, 10.0, 0.0, snr_db);
      const auto q = scalar_covariance(spec);
      const auto eff = effective_channel(spec, q);
      cell.st = asymptotic_stats(eff, solve_fixed_point(eff));
      McConfig cfg;
      cfg.trials = trials;
      cfg.master_seed = 0xC0FFEEull + static_cast<std::uint64_t>(n * 1000 + snr_db);
      cell.mc = estimate(spec, q, cfg, {0.1, 0.5, 0.9});
      grid.push_back(std::move(cell));
    }
  }

  double worst_mean = 0.0, worst_std = 0.0, worst_outage = 0.0;
  for (const auto& cell : grid) {
    const std::string tag = "n=" + std::to_string(cell.n) + " snr=" + fmt(cell.snr_db);

    const double rel_mean = std::abs(cell.st.mean_nats - cell.mc.mean_nats) / cell.mc.mean_nats;
    worst_mean = std::max(worst_mean, rel_mean);
    if (rel_mean >= 0.02) {
      c4.fail(tag + ": mean rel err " + fmt(100 * rel_mean) + "%");
    }
    if (cell.n == 4 && cell.snr_db == 10.0) {
      const double bound = std::max(3.0 * cell.mc.stderr_mean / cell.mc.mean_nats, 0.005);
      if (rel_mean >= bound) {
        c4.fail(tag + ": mean rel err " + fmt(100 * rel_mean) + "% above max(3 stderr, 0.5%)");
      }
    }

    const double mc_std = std::sqrt(cell.mc.var_nats2);
    const double rel_std = std::abs(std::sqrt(cell.st.variance_nats2) - mc_std) / mc_std;
    worst_std = std::max(worst_std, rel_std);
    if (rel_std >= 0.07) {
      c5.fail(tag + ": std rel err " + fmt(100 * rel_std) + "%");
    }

    const double i10 = outage_rate(cell.st, 0.1);
    const double q10 = cell.mc.quantiles.at(0.1);
    const double rel_out = std::abs(i10 - q10) / std::abs(q10);
    worst_outage = std::max(worst_outage, rel_out);
    if (rel_out >= 0.015) {
      c6.fail(tag + ": outage rel err " + fmt(100 * rel_out) + "%");
    }

    if (cell.n == 8 && cell.snr_db == 10.0) {
      const double sigma = std::sqrt(cell.st.variance_nats2);
      for (double p : {0.1, 0.5, 0.9}) {
        const double gauss = cell.st.mean_nats - sigma * q_inverse(p);
        const double emp = cell.mc.quantiles.at(p);
        const double rel = std::abs(gauss - emp) / std::abs(emp);
        if (rel >= 0.02) {
          c9.fail("quantile " + fmt(p) + " rel err " + fmt(100 * rel) + "%");
        } else if (p == 0.5) {
          c9.note("quantile rel errs at 10/50/90% all < 2%");
        }
      }
    }
  }
  c4.note("worst mean rel err " + fmt(100 * worst_mean) + "% (10^6 trials/cell)");
  c5.note("worst std rel err " + fmt(100 * worst_std) + "%");
  c6.note("worst outage rel err " + fmt(100 * worst_outage) + "%");
}

// ---------------------------------------------------------------------------
// 7. Monte-Carlo sampler vs the exact SISO ergodic integral.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

void criterion7(Criterion& c) {
  // E[ln(1 + 3 t)] with t ~ Exp(1), by adaptive Simpson on [0, 60]; the
  // truncated tail is below e^-60 ln(181) ~ 5e-25.
  auto integrand = [](double t) { return std::log1p(3.0 * t) * std::exp(-t); };
  const double exact =
      simpson(integrand, 0.0, 60.0, integrand(0.0), integrand(30.0), integrand(60.0), 1e-13, 40);

  const auto spec = baseline_spec(1, 1, -kInf, 0.0, 10.0 * std::log10(3.0));
  McConfig cfg;
  cfg.trials = 1'000'000;
  cfg.master_seed = 424242;
  const auto est = estimate(spec, scalar_covariance(spec), cfg, {});
  const double dev = std::abs(est.mean_nats - exact);
  if (dev >= 3.0 * est.stderr_mean) {
    c.fail("MC mean " + fmt(est.mean_nats) + " vs exact " + fmt(exact) + " deviates by " +
           fmt(dev / est.stderr_mean) + " stderr");
  }
  c.note("deviation " + fmt(dev / est.stderr_mean) + " stderr (exact " + fmt(exact) + ")");
}

// ---------------------------------------------------------------------------
// 8. Water-filling optimality.
void criterion8(Criterion& c) {
  // (a) Rayleigh: exact uniform power.
  {
    ChannelSpec spec;
    spec.n_t = spec.n_r = 4;
    spec.h_bar = ComplexMatrix::Zero(4, 4);
    spec.t_corr = HermitianMatrix::identity(4);
    spec.r_corr = HermitianMatrix::identity(4);
    spec.snr_db = 6.0;
    spec.rice_k_db = -kInf;
    const auto sol = optimize_uncorrelated(spec);
    const double rho = db_to_linear(6.0);
    for (int i = 0; i < 4; ++i) {
      if (sol.q_bar_diag(i) != rho / 4.0) {
        c.fail("Rayleigh power not exactly uniform");
        break;
      }
    }
  }

  // (b) + (c) randomized uncorrelated Rician instances.
  std::mt19937_64 rng(777);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_kkt = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n_t = 1 + static_cast<int>(uni(rng) * 5.99);
    const int n_r = 1 + static_cast<int>(uni(rng) * 5.99);
    ChannelSpec spec;
    spec.n_t = n_t;
    spec.n_r = n_r;
    spec.h_bar = ComplexMatrix(n_r, n_t);
    for (int i = 0; i < n_r; ++i)
      for (int j = 0; j < n_t; ++j) spec.h_bar(i, j) = {n01(rng), n01(rng)};
    spec.t_corr = HermitianMatrix::identity(n_t);
    spec.r_corr = HermitianMatrix::identity(n_r);
    spec.snr_db = -3.0 + 16.0 * uni(rng);
    spec.rice_k_db = trial % 2 ? 10.0 : 0.0;

    const auto sol = optimize_uncorrelated(spec);
    const double rho = db_to_linear(spec.snr_db);
    if (std::abs(sol.q_bar_diag.sum() - rho) > 1e-8 * (1.0 + rho)) {
      c.fail("power budget violated on trial " + std::to_string(trial));
    }
    const auto modes = los_eigenmodes(normalize_spec(spec).h_bar);
    for (int i = 0; i < n_t; ++i) {
      const double level = (1.0 + sol.w) / (sol.z * (1.0 + sol.w) + modes.eigvals(i));
      if (sol.q_bar_diag(i) > 1e-10) {
        worst_kkt = std::max(worst_kkt, std::abs(sol.xi - level - sol.q_bar_diag(i)));
        if (std::abs(sol.xi - level - sol.q_bar_diag(i)) > 1e-8) {
          c.fail("KKT violated on active mode, trial " + std::to_string(trial));
        }
      } else if (sol.xi > level + 1e-10) {
        c.fail("KKT violated on inactive mode, trial " + std::to_string(trial));
      }
    }

    // (c) never below uniform power at the same budget Tr(Q) = rho.
    const auto norm = normalize_spec(spec);
    const HermitianMatrix q_uniform(rho / n_t * ComplexMatrix::Identity(n_t, n_t));
    const auto eff_u = effective_channel(norm, q_uniform);
    const double uniform_mu = asymptotic_stats(eff_u, solve_fixed_point(eff_u)).mean_nats;
    if (sol.capacity_nats < uniform_mu - 1e-9) {
      c.fail("optimized capacity below uniform on trial " + std::to_string(trial));
    }
  }

  // (c) strict improvement on a rank-one LOS at 0 dB.
  {
    const auto spec = baseline_spec(4, 4, 10.0, 0.0, 0.0);
    const HermitianMatrix q_uniform(0.25 * ComplexMatrix::Identity(4, 4));  // rho/n_t, rho = 1
    const auto eff_u = effective_channel(spec, q_uniform);
    const double uniform_mu = asymptotic_stats(eff_u, solve_fixed_point(eff_u)).mean_nats;
    const auto sol = optimize_uncorrelated(spec);
    const double gain = (sol.capacity_nats - uniform_mu) / uniform_mu;
    if (gain <= 0.001) {
      c.fail("rank-one improvement only " + fmt(100 * gain) + "%");
    }
    c.note("KKT residual max " + fmt(worst_kkt) + ", rank-one gain " + fmt(100 * gain) + "%");
  }
}

// ---------------------------------------------------------------------------
// 10. Byte-identical sweep output at 1 and many workers.
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10(Criterion& c) {
  SweepConfig cfg = default_config();
  cfg.mc.trials = 3000;
  cfg.mc.master_seed = 20260809;

  cfg.workers = 1;
  cfg.output_path = "acceptance_sweep_w1.csv";
  run_sweep(cfg);
  cfg.output_path = "acceptance_sweep_w1b.csv";
  run_sweep(cfg);
  cfg.workers = 4;
  cfg.output_path = "acceptance_sweep_w4.csv";
  run_sweep(cfg);

  const std::string a = slurp("acceptance_sweep_w1.csv");
  const std::string b = slurp("acceptance_sweep_w1b.csv");
  const std::string d = slurp("acceptance_sweep_w4.csv");
  if (a.empty()) c.fail("sweep CSV missing");
  if (a != b) c.fail("rerun at 1 worker differs");
  if (a != d) c.fail("4-worker run differs from 1-worker run");
  c.note(std::to_string(a.size()) + " bytes, identical across reruns and worker counts");
  for (const char* p : {"acceptance_sweep_w1.csv", "acceptance_sweep_w1b.csv",
                        "acceptance_sweep_w4.csv"}) {
    std::remove(p);
    std::remove((std::string(p) + ".summary.json").c_str());
  }
}

}  // namespace

int main() {
  std::vector<Criterion> cs;
  for (int i = 1; i <= 10; ++i) cs.push_back(Criterion{i, ""});

  auto timed = [](Criterion& c, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  timed(cs[0], [&] { criterion1(cs[0]); });
  if (cs[0].seconds >= 1.0) cs[0].fail("runtime above 1 s");

  std::vector<FamilyInstance> family;
  timed(cs[1], [&] { criteria23(cs[1], cs[2], family); });
  cs[2].seconds = 0.0;  // computed jointly with criterion 2
  if (cs[1].seconds >= 60.0) cs[1].fail("runtime above 1 min");

  timed(cs[3], [&] { criteria4569(cs[3], cs[4], cs[5], cs[8]); });
  if (cs[3].seconds >= 300.0) cs[3].fail("runtime above 5 min");
  cs[4].seconds = cs[5].seconds = cs[8].seconds = 0.0;  // share the grid run

  timed(cs[6], [&] { criterion7(cs[6]); });
  timed(cs[7], [&] { criterion8(cs[7]); });
  if (cs[7].seconds >= 60.0) cs[7].fail("runtime above 1 min");
  timed(cs[9], [&] { criterion10(cs[9]); });

  static const char* kNames[] = {
      "SISO Rayleigh closed form",
      "solver cross-agreement (picard vs bisection)",
      "stability inequality and two-route gamma",
      "ergodic-mean accuracy vs Monte-Carlo oracle",
      "standard-deviation accuracy vs Monte-Carlo oracle",
      "outage accuracy at eps = 0.1",
      "SISO exact ergodic integral vs sampler",
      "water-filling optimality (uniform/KKT/improvement)",
      "Gaussianity probe at n = 8",
      "byte-identical sweep determinism",
  };

  int failures = 0;
  for (const auto& c : cs) {
    if (!c.pass) ++failures;
    std::printf("criterion %2d %-4s (%6.1fs) %s: %s\n", c.id, c.pass ? "PASS" : "FAIL", c.seconds,
                kNames[c.id - 1], c.detail.c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
