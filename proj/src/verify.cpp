#include "clades/verify.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "clades/enumerate.hpp"
#include "clades/errors.hpp"
#include "clades/exact.hpp"
#include "clades/functionals.hpp"
#include "clades/mc.hpp"
#include "clades/stats.hpp"
#include "clades/treegen.hpp"

namespace clades {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// accumulates sub-check verdicts for one criterion
struct Checker {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      detail += " [FAIL]";
      pass = false;
    }
  }
};

double sd_of_mean(const MomentSummary& s) {
  return s.stddev() / std::sqrt(static_cast<double>(s.count));
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options, std::ostream& progress) {
  const bool quick = options.quick;
  const int threads = options.threads > 0
                          ? options.threads
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::uint64_t seed = options.seed;
  const double alpha = alpha_closed();

  std::vector<CheckResult> results;
  const auto suite_start = Clock::now();
  auto emit = [&](int id, const std::string& name, const Checker& c, Clock::time_point t0) {
    CheckResult r{id, name, c.pass, c.detail, seconds_since(t0)};
    progress << "[" << (id < 10 ? " " : "") << id << "/12] " << (r.pass ? "PASS" : "FAIL") << "  "
             << name << "  (" << fmt(r.seconds, 3) << "s)\n    " << r.detail << "\n";
    progress.flush();
    results.push_back(std::move(r));
  };

  // shared exact tables
  ExactTables tables = build_mu_nu(100000);
  build_psi(10000, tables);
  const FDist fdist = build_f_dist(512);

  // ---- 1: constants -------------------------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    const double series = alpha_series(1000000);
    c.check(std::abs(series - alpha) < 2e-5,
            "|alpha_series(1e6) - (1-e^-2)/4| = " + fmt(std::abs(series - alpha), 3));
    double alt = 0.0;
    for (int k = 1; k <= 30; ++k) alt += (k % 2 == 1 ? 1.0 : -1.0) * e_fk_ct(k);
    c.check(std::abs(alt - alpha) < 1e-12,
            "|alt chain sum - alpha| = " + fmt(std::abs(alt - alpha), 3));
    const double dt = seconds_since(t0);
    c.check(dt < 2.0, "runtime " + fmt(dt, 3) + "s < 2s");
    emit(1, "constants: alpha series and alternating chain sum", c, t0);
  }

  // ---- 2: enumeration oracle equivalence ----------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    double worst_nu = 0.0, worst_dist = 0.0, worst_z = 0.0;
    for (int n = 1; n <= 10; ++n) {
      worst_nu = std::max(worst_nu, std::abs(static_cast<double>(enum_nu(n)) -
                                             tables.nu[static_cast<std::size_t>(n)]));
      const auto dist = enum_f_dist(n);
      const auto& row = fdist.row(n);
      for (std::int64_t m = 0; m <= n; ++m) {
        const auto it = dist.find(m);
        const double want = it == dist.end() ? 0.0 : static_cast<double>(it->second);
        worst_dist = std::max(worst_dist, std::abs(row[static_cast<std::size_t>(m)] - want));
      }
      for (int k = 1; k <= n; ++k)
        worst_z = std::max(worst_z, std::abs(static_cast<double>(enum_EZ(n, k)) - expected_Zk(n, k)));
    }
    c.check(worst_nu < 1e-12, "max |nu - enum| = " + fmt(worst_nu, 3));
    c.check(worst_dist < 1e-12, "max |P(F=m) - enum| = " + fmt(worst_dist, 3));
    c.check(worst_z < 1e-12, "max |E Z - enum| = " + fmt(worst_z, 3));
    c.check(enum_nu(3) == Rational(4, 3) && enum_nu(4) == Rational(3, 2) &&
                enum_mu(4) == Rational(-1, 6),
            "anchors nu_3=4/3, nu_4=3/2, mu_4=-1/6");
    c.check(enum_f_dist(3).at(2) == Rational(1, 3), "P(F_3=2)=1/3");
    c.check(enum_EZ(3, 1) == Rational(4, 3), "E Z_{3,1}=4/3");
    emit(2, "exhaustive enumeration reproduces nu, F-dist, E Z (n <= 10)", c, t0);
  }

  // ---- 3: exact integer identity suite ------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    const std::int64_t trees = quick ? 10000 : 100000;
    std::int64_t failures = 0;
    RngStream size_stream(seed, 1u << 20);
    SplitStreamer streamer;
    SplitStats stats;
    for (std::int64_t r = 0; r < trees; ++r) {
      const auto n = 1 + static_cast<std::int64_t>(size_stream.uniform_below(200));
      RngStream rng(seed, static_cast<std::uint64_t>(r));
      SplitStats::Options opt;
      opt.cutoff = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
      opt.chain_depth = kMaxChainDepth;
      opt.nu = tables.nu.data();
      opt.nu_len = static_cast<std::int64_t>(tables.nu.size());
      stats.reset(opt);
      streamer.run(n, rng, stats);
      const auto t = stats.finish(n);
      std::int64_t alt_F = 0, alt_f = 0;
      for (int k = 1; k <= kMaxChainDepth; ++k) {
        const auto sgn = k % 2 == 1 ? 1 : -1;
        alt_F += sgn * static_cast<std::int64_t>(t.F_chains[static_cast<std::size_t>(k - 1)]);
        alt_f += sgn * static_cast<std::int64_t>(t.f_chains[static_cast<std::size_t>(k - 1)]);
      }
      const bool ok = t.F == t.toll_sum && alt_F == t.F && alt_f == t.root_toll &&
                      t.F_small == t.F_small_direct && t.F == t.F_small + t.F_large &&
                      t.maximal_external_sum == n + 1 && !t.chain_overflow &&
                      t.maximal_count == t.F && (t.F == 1) == t.root_green;
      failures += ok ? 0 : 1;
    }
    c.check(failures == 0,
            fmt(static_cast<double>(trees), 7) + " trees (n in 1..200), failures = " +
                std::to_string(failures));
    emit(3, "exact integer identities on sampled trees", c, t0);
  }

  // ---- 4: P(F=1) = 2/n, exact and empirical -------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    double worst = 0.0;
    for (std::int64_t n = 2; n <= 512; ++n)
      worst = std::max(worst, std::abs(fdist.row(n)[1] - 2.0 / static_cast<double>(n)));
    c.check(worst < 1e-12, "max |P(F=1) - 2/n| over n<=512 = " + fmt(worst, 3));
    for (const std::int64_t n : {std::int64_t{100}, std::int64_t{1000}}) {
      SimConfig cfg;
      cfg.n = n;
      cfg.replicates = quick ? 20000 : 100000;
      cfg.seed = seed + 4;
      cfg.workers = threads;
      const auto res = run_experiment(cfg);
      std::int64_t ones = 0;
      for (const double x : res.raw.at("F")) ones += x == 1.0;
      const double p = 2.0 / static_cast<double>(n);
      const double se = std::sqrt(p * (1 - p) * static_cast<double>(cfg.replicates));
      const double dev = std::abs(static_cast<double>(ones) - p * static_cast<double>(cfg.replicates));
      c.check(dev < 4.0 * se, "n=" + std::to_string(n) + ": |obs - 2R/n| = " + fmt(dev, 4) +
                                  " < 4 SE = " + fmt(4 * se, 4));
    }
    emit(4, "root-green law P(F=1) = 2/n", c, t0);
  }

  // ---- 5: mean growth ------------------------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    double max_early = 0.0, max_late = 0.0, max_all = 0.0;
    for (std::int64_t n = 1; n <= 100000; ++n) {
      const double dev = std::abs(tables.nu[static_cast<std::size_t>(n)] -
                                  alpha * static_cast<double>(n));
      max_all = std::max(max_all, dev);
      (n <= 10000 ? max_early : max_late) = std::max(n <= 10000 ? max_early : max_late, dev);
    }
    c.check(max_all < 1.0, "max_{n<=1e5} |nu_n - alpha n| = " + fmt(max_all, 6) + " < 1");
    c.check(max_late <= max_early,
            "non-growing: max over (1e4,1e5] = " + fmt(max_late, 6) + " <= max over [1,1e4] = " +
                fmt(max_early, 6));
    const double rel = std::abs(tables.nu[100000] / 100000.0 - alpha);
    c.check(rel < 1e-4, "|nu_1e5/1e5 - alpha| = " + fmt(rel, 3));
    emit(5, "mean growth nu_n = alpha n + O(1)", c, t0);
  }

  // big run at n = 1e4, N = 100, shared by criteria 6 and 7
  ExperimentResult run6;

  // ---- 6: Var G ------------------------------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    SimConfig big;
    big.n = 10000;
    big.cutoff = 100;
    big.replicates = quick ? 30000 : 100000;
    big.seed = seed + 6;
    big.workers = threads;
    big.record_gh = true;
    big.store_raw = false;
    run6 = run_experiment(big, &tables);
    const auto& F = run6.summaries.at("F");
    const double mean_dev = std::abs(F.mean - tables.nu[10000]);
    c.check(mean_dev < 4.0 * sd_of_mean(F),
            "|mean F - nu_1e4| = " + fmt(mean_dev, 4) + " < 4 SE = " + fmt(4 * sd_of_mean(F), 4));
    const double vg_exact = var_G_exact(10000, tables);
    const double vg_mc = run6.summaries.at("G").variance();
    c.check(std::abs(vg_mc - vg_exact) < 0.05 * vg_exact,
            "VarG exact = " + fmt(vg_exact, 6) + ", MC = " + fmt(vg_mc, 6) + " (" +
                fmt(100 * std::abs(vg_mc - vg_exact) / vg_exact, 2) + "% off)");
    const double r3 = var_G_exact(1000, tables) / (4 * alpha * alpha * 1000 * std::log(1000.0));
    const double r4 = var_G_exact(10000, tables) / (4 * alpha * alpha * 10000 * std::log(10000.0));
    c.check(r4 > 0.5 && r4 < 1.5, "r(1e4) = " + fmt(r4, 4) + " in (0.5, 1.5)");
    c.check(std::abs(r4 - 1) < std::abs(r3 - 1),
            "|r(1e4)-1| = " + fmt(std::abs(r4 - 1), 4) + " < |r(1e3)-1| = " + fmt(std::abs(r3 - 1), 4));
    emit(6, "exact Var G vs Monte Carlo and its n log n trend", c, t0);
  }

  // ---- 7: cutoff variance ---------------------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    const double vgp_exact = var_Gprime_exact(10000, 100, tables);
    const double vgp_mc = run6.summaries.at("Gp").variance();
    c.check(std::abs(vgp_mc - vgp_exact) < 0.05 * vgp_exact,
            "VarG' exact = " + fmt(vgp_exact, 6) + ", MC = " + fmt(vgp_mc, 6) + " (" +
                fmt(100 * std::abs(vgp_mc - vgp_exact) / vgp_exact, 2) + "% off)");
    const double vxn = run6.summaries.at("XN").variance();
    const double ratio = vxn / vgp_exact;
    c.check(ratio > 0.8 && ratio < 1.2,
            "Var(X^N)_mc / VarG'_exact = " + fmt(ratio, 4) + " in (0.8, 1.2)");
    emit(7, "exact cutoff variance Var G' and Var X^N band", c, t0);
  }

  // ---- 8: half-variance CLT phenomenon -------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    SimConfig cfg;
    cfg.n = 100000;
    cfg.cutoff = 317;  // ceil(sqrt(1e5))
    cfg.replicates = quick ? 8000 : 20000;
    cfg.seed = seed + 8;
    cfg.workers = threads;
    const auto res = run_experiment(cfg);
    const auto& F = res.summaries.at("F");
    const auto& XN = res.summaries.at("XN");
    const double ratio = F.variance() / XN.variance();
    c.check(ratio > 1.4 && ratio < 2.6, "Var(X)/Var(X^N) = " + fmt(ratio, 4) + " in (1.4, 2.6)");
    const auto diag_xn = normality_self(res.raw.at("XN"));
    c.check(diag_xn.ks < 0.03, "KS(X^N self-standardized) = " + fmt(diag_xn.ks, 4) + " < 0.03");
    const double half_sd =
        std::sqrt(2 * alpha * alpha * static_cast<double>(cfg.n) * std::log(static_cast<double>(cfg.n)));
    const auto diag_half = normality(res.raw.at("F"), F.mean, half_sd);
    const double var_std = F.variance() / (half_sd * half_sd);
    c.check(var_std > 1.4 && var_std < 2.6,
            "Var(X / sqrt(2 a^2 n ln n)) = " + fmt(var_std, 4) + " in (1.4, 2.6)");
    c.check(diag_half.ks > diag_xn.ks, "KS(X half-normalized) = " + fmt(diag_half.ks, 4) +
                                           " > KS(X^N) = " + fmt(diag_xn.ks, 4));
    emit(8, "half-variance normalization at n = 1e5", c, t0);
  }

  // ---- 9: higher moments from the exact distribution ------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    const std::vector<std::int64_t> grid{64, 128, 256, 512};
    std::vector<double> r3, rsum, r25;
    bool all_negative = true;
    for (const auto n : grid) {
      const double m3 = central_moment(n, 3, fdist);
      all_negative &= m3 < 0.0;
      r3.push_back(m3 / (-6.0 * std::pow(alpha, 3) * static_cast<double>(n) * static_cast<double>(n)));
      rsum.push_back(sum_f_abs_exact(n, 3.0, fdist) /
                     (6.0 * std::pow(alpha, 3) * static_cast<double>(n) * static_cast<double>(n)));
      const double p = 2.5;
      const double a25 = abs_central_moment(n, p, fdist);
      c.check(a25 > 0.0, "E|X-EX|^2.5 > 0 at n=" + std::to_string(n));
      r25.push_back(a25 / ((2 * p / (p - 2)) * std::pow(alpha, p) *
                           std::pow(static_cast<double>(n), p - 1)));
    }
    c.check(all_negative, "third central moment negative on the grid");
    c.check(std::abs(r3.back() - 1) < std::abs(r3.front() - 1),
            "m3 ratio trend " + fmt(r3.front(), 4) + " -> " + fmt(r3.back(), 4));
    c.check(std::abs(rsum.back() - 1) < std::abs(rsum.front() - 1),
            "sum|f|^3 ratio trend " + fmt(rsum.front(), 4) + " -> " + fmt(rsum.back(), 4));
    c.check(std::abs(r25.back() - 1) < std::abs(r25.front() - 1),
            "p=2.5 ratio trend " + fmt(r25.front(), 4) + " -> " + fmt(r25.back(), 4));
    emit(9, "higher-moment asymptotics from the exact distribution", c, t0);
  }

  // ---- 10: large clades are rare --------------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    auto rate_at = [&](std::int64_t n) {
      SimConfig cfg;
      cfg.n = n;
      cfg.cutoff = static_cast<std::int64_t>(
          std::ceil(std::sqrt(static_cast<double>(n) * std::log(std::log(static_cast<double>(n))))));
      cfg.replicates = quick ? 20000 : 100000;
      cfg.seed = seed + 10;
      cfg.workers = threads;
      return tail_event_rate(cfg);
    };
    const TailRate r3 = rate_at(1000);
    const TailRate r4 = rate_at(10000);
    c.check(r4.rate <= r4.exact_bound + 4.0 * r4.se,
            "rate(1e4) = " + fmt(r4.rate, 4) + " <= bound " + fmt(r4.exact_bound, 4) + " + 4 SE");
    c.check(r4.rate < r3.rate,
            "rate(1e4) = " + fmt(r4.rate, 4) + " < rate(1e3) = " + fmt(r3.rate, 4));
    emit(10, "large-clade event rate under the Markov bound", c, t0);
  }

  // ---- 11: samplers and lambda formulas -------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    {
      SimConfig cfg;
      cfg.model = Model::ct_clock;
      cfg.lambda = 1.0;
      cfg.replicates = quick ? 200000 : 1000000;
      cfg.seed = seed + 11;
      cfg.workers = threads;
      cfg.chain_depth = 20;
      cfg.chain_record = 4;
      cfg.cap_policy = CapPolicy::resample;
      cfg.store_raw = false;
      const auto res = run_experiment(cfg);
      // size pmf for n <= 20 against 2/((n+1)(n+2)), for both samplers
      std::vector<std::int64_t> counts(20, 0);
      std::vector<double> probs(20);
      for (std::int64_t n = 1; n <= 20; ++n)
        probs[static_cast<std::size_t>(n - 1)] =
            2.0 / (static_cast<double>(n + 1) * static_cast<double>(n + 2));
      for (std::int64_t r = 0; r < cfg.replicates; ++r) {
        RngStream rng(seed + 14, static_cast<std::uint64_t>(r));
        const auto n = sample_ct_size(rng);
        if (n <= 20) counts[static_cast<std::size_t>(n - 1)]++;
      }
      const double p_inv = chi_square_gof_pvalue(counts, probs, cfg.replicates);
      c.check(p_inv > 0.001, "inverse-CDF sampler size pmf chi-square p = " + fmt(p_inv, 4));
      std::fill(counts.begin(), counts.end(), 0);
      std::int64_t total = 0;
      for (std::int64_t r = 0; r < cfg.replicates; ++r) {
        RngStream rng(cfg.seed + 1, static_cast<std::uint64_t>(r));
        try {
          const auto n = sample_ct_clock(1.0, rng).size();
          if (n <= 20) counts[static_cast<std::size_t>(n - 1)]++;
          ++total;
        } catch (const CapExceededError&) {
          ++total;  // tail bucket
        }
      }
      const double p_clock = chi_square_gof_pvalue(counts, probs, total);
      c.check(p_clock > 0.001, "clock sampler size pmf chi-square p = " + fmt(p_clock, 4));
      for (int k = 1; k <= 4; ++k) {
        const auto& s = res.summaries.at("fk_" + std::to_string(k));
        const double se = sd_of_mean(s);
        const double dev = std::abs(s.mean - e_fk_ct(k));
        c.check(dev < 4.0 * se, "E f_" + std::to_string(k) + " dev = " + fmt(dev, 4) +
                                    " < 4 SE = " + fmt(4 * se, 4));
      }
    }
    {
      // lambda = 2 size law
      const std::int64_t R = quick ? 200000 : 1000000;
      std::vector<std::int64_t> counts(10, 0);
      std::vector<double> probs(10);
      for (std::int64_t n = 1; n <= 10; ++n)
        probs[static_cast<std::size_t>(n - 1)] = ct_lambda_size_pmf(2.0, n);
      std::int64_t total = 0;
      for (std::int64_t r = 0; r < R; ++r) {
        RngStream rng(seed + 12, static_cast<std::uint64_t>(r));
        try {
          const auto n = sample_ct_clock(2.0, rng).size();
          if (n <= 10) counts[static_cast<std::size_t>(n - 1)]++;
          ++total;
        } catch (const CapExceededError&) {
          ++total;
        }
      }
      const double p2 = chi_square_gof_pvalue(counts, probs, total);
      c.check(p2 > 0.001, "lambda=2 size pmf chi-square p = " + fmt(p2, 4));
    }
    const double resid = genfunc_residual(3.0, 100000, tables);
    c.check(resid < 1e-3, "genfunc residual(lambda=3, 1e5) = " + fmt(resid, 3));
    c.check(std::abs(e_f_ct_lambda(1.0) - alpha) < 1e-12, "E f(T^1) = alpha to 1e-12");
    emit(11, "stopped-tree samplers and lambda formulas", c, t0);
  }

  // ---- 12: performance -------------------------------------------------------
  {
    const auto t0 = Clock::now();
    Checker c;
    std::vector<std::int64_t> census;
    SplitStats::Options opt;
    opt.cutoff = 1000;  // ceil(sqrt(1e6))
    opt.census = &census;
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      census.assign(1000001, 0);
      RngStream rng(seed + 13, static_cast<std::uint64_t>(rep));
      SplitStats stats(opt);
      SplitStreamer streamer;
      const auto r0 = Clock::now();
      streamer.run(1000000, rng, stats);
      const auto t = stats.finish(1000000);
      best = std::min(best, seconds_since(r0));
      if (t.F <= 0) c.check(false, "replicate produced no clades");
    }
    c.check(best < 0.050,
            "one replicate (F, X^N, census) at n=1e6: " + fmt(best * 1e3, 4) + " ms < 50 ms");
    const double total = seconds_since(suite_start);
    if (quick)
      c.check(total < 300.0, "quick suite " + fmt(total, 3) + "s < 300s");
    else
      c.check(total < 3600.0, "full suite " + fmt(total, 3) + "s < 3600s");
    emit(12, "performance budget", c, t0);
  }

  return results;
}

}  // namespace clades
