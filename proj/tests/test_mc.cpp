#include "clades/mc.hpp"

#include <cmath>

#include "clades/errors.hpp"
#include "doctest.h"

using namespace clades;

TEST_CASE("n=2 trees always have exactly one maximal clade") {
  SimConfig cfg;
  cfg.n = 2;
  cfg.replicates = 5000;
  cfg.seed = 12;
  const auto res = run_experiment(cfg);
  const auto& F = res.summaries.at("F");
  CHECK(F.mean == 1.0);
  CHECK(F.variance() == 0.0);
  CHECK(F.min == 1.0);
  CHECK(F.max == 1.0);
}

TEST_CASE("results are identical for any worker count") {
  ExactTables tables = build_mu_nu(300);
  SimConfig base;
  base.n = 300;
  base.replicates = 4000;
  base.seed = 777;
  base.record_gh = true;
  base.chain_record = 3;
  ExperimentResult first;
  bool have_first = false;
  for (const int workers : {1, 2, 8}) {
    SimConfig cfg = base;
    cfg.workers = workers;
    const auto res = run_experiment(cfg, &tables);
    if (!have_first) {
      first = res;
      have_first = true;
      continue;
    }
    REQUIRE(res.keys == first.keys);
    for (const auto& key : res.keys) {
      const auto& a = res.raw.at(key);
      const auto& b = first.raw.at(key);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
      const auto& sa = res.summaries.at(key);
      const auto& sb = first.summaries.at(key);
      CHECK(sa.mean == sb.mean);
      for (int k = 2; k <= 6; ++k) CHECK(sa.moment(k) == sb.moment(k));
    }
  }
}

TEST_CASE("mean F tracks nu within 4 SE") {
  const std::int64_t n = 100;
  ExactTables tables = build_mu_nu(n);
  SimConfig cfg;
  cfg.n = n;
  cfg.replicates = 20000;
  cfg.seed = 31;
  const auto res = run_experiment(cfg);
  const auto& F = res.summaries.at("F");
  const double se = F.stddev() / std::sqrt(static_cast<double>(F.count));
  CHECK(std::abs(F.mean - tables.nu[static_cast<std::size_t>(n)]) < 4.0 * se);
}

TEST_CASE("P(F=1) is 2/n empirically") {
  const std::int64_t n = 50;
  SimConfig cfg;
  cfg.n = n;
  cfg.replicates = 50000;
  cfg.seed = 88;
  const auto res = run_experiment(cfg);
  const auto& raw = res.raw.at("F");
  std::int64_t ones = 0;
  for (const double x : raw) ones += x == 1.0;
  const double p = 2.0 / static_cast<double>(n);
  const double se = std::sqrt(p * (1 - p) * static_cast<double>(cfg.replicates));
  CHECK(std::abs(static_cast<double>(ones) - p * static_cast<double>(cfg.replicates)) < 4.0 * se);
}

TEST_CASE("tail event vanishes when the cutoff covers the tree") {
  SimConfig cfg;
  cfg.n = 64;
  cfg.cutoff = 64;
  cfg.replicates = 2000;
  cfg.seed = 5;
  const auto tr = tail_event_rate(cfg);
  CHECK(tr.rate == 0.0);
  CHECK(tr.count == 2000);
  CHECK(tr.exact_bound == 0.0);
  // with N = n-1 only the k = n (green root) term survives
  SimConfig cfg2 = cfg;
  cfg2.cutoff = 63;
  CHECK(tail_event_rate(cfg2).exact_bound == doctest::Approx(2.0 / 64.0));
}

TEST_CASE("tail event rate respects the Markov bound and shrinks with N") {
  const std::int64_t n = 1000;
  double last_rate = 1.0;
  for (const std::int64_t N : {32, 64, 128}) {
    SimConfig cfg;
    cfg.n = n;
    cfg.cutoff = N;
    cfg.replicates = 20000;
    cfg.seed = 606;
    const auto tr = tail_event_rate(cfg);
    CHECK(tr.rate <= tr.exact_bound + 4.0 * tr.se);
    CHECK(tr.rate <= last_rate);
    last_rate = tr.rate;
  }
}

TEST_CASE("ct-clock chain statistics match the closed forms") {
  SimConfig cfg;
  cfg.model = Model::ct_clock;
  cfg.lambda = 1.0;
  cfg.replicates = 100000;
  cfg.seed = 404;
  cfg.chain_depth = 20;
  cfg.chain_record = 3;
  cfg.cap_policy = CapPolicy::resample;
  cfg.store_raw = false;
  const auto res = run_experiment(cfg);
  for (int k = 1; k <= 3; ++k) {
    const auto& s = res.summaries.at("fk_" + std::to_string(k));
    const double se = s.stddev() / std::sqrt(static_cast<double>(s.count));
    CHECK(std::abs(s.mean - e_fk_ct(k)) < 4.0 * se);
  }
  CHECK(res.summaries.at("Fk_1").mean >= res.summaries.at("fk_1").mean);
}

TEST_CASE("ct-clock chain statistics at lambda = 2 (scaled formulas)") {
  SimConfig cfg;
  cfg.model = Model::ct_clock;
  cfg.lambda = 2.0;
  cfg.replicates = 120000;
  cfg.seed = 515;
  cfg.chain_depth = 20;
  cfg.chain_record = 2;
  cfg.cap_policy = CapPolicy::resample;
  cfg.store_raw = false;
  const auto res = run_experiment(cfg);
  for (int k = 1; k <= 2; ++k) {
    const auto& s = res.summaries.at("fk_" + std::to_string(k));
    const double se = s.stddev() / std::sqrt(static_cast<double>(s.count));
    CHECK(std::abs(s.mean - e_fk_ct_lambda(k, 2.0)) < 4.0 * se);
  }
  // E F_k = (lambda+1)/(lambda-1) E f_k = 3 E f_k at lambda = 2
  const auto& F1 = res.summaries.at("Fk_1");
  const double seF = F1.stddev() / std::sqrt(static_cast<double>(F1.count));
  CHECK(std::abs(F1.mean - 3.0 * e_fk_ct_lambda(1, 2.0)) < 4.0 * seF);
}

TEST_CASE("cap policy") {
  SUBCASE("propagate carries the replicate id") {
    SimConfig cfg;
    cfg.model = Model::ct_clock;
    cfg.cap = 2;
    cfg.replicates = 500;
    cfg.seed = 2024;
    try {
      run_experiment(cfg);
      FAIL("expected CapExceededError");
    } catch (const CapExceededError& e) {
      CHECK(e.cap == 2);
      CHECK(e.replicate >= 0);
      CHECK(e.replicate < 500);
    }
  }
  SUBCASE("resample counts events and completes") {
    SimConfig cfg;
    cfg.model = Model::ct_clock;
    cfg.cap = 4;
    cfg.replicates = 2000;
    cfg.seed = 2024;
    cfg.cap_policy = CapPolicy::resample;
    const auto res = run_experiment(cfg);
    CHECK(res.cap_exceeded > 0);
    CHECK(res.summaries.at("size").count == 2000);
    CHECK(res.summaries.at("size").max <= 4.0);
  }
}

TEST_CASE("abs moments from raw samples") {
  SimConfig cfg;
  cfg.n = 32;
  cfg.replicates = 4000;
  cfg.seed = 9;
  cfg.abs_p = {2.5};
  const auto res = run_experiment(cfg);
  const double direct = abs_central_moment_raw(res.raw.at("F"), 2.5);
  CHECK(res.abs_moments.at("F").at(2.5) == doctest::Approx(direct));
  // p = 2 would be the variance; 2.5 sits between m2 and m3 scales
  CHECK(direct > 0.0);
}

TEST_CASE("summaries merge like the raw concatenation") {
  SimConfig cfg;
  cfg.n = 64;
  cfg.replicates = 10000;
  cfg.seed = 123;
  const auto res = run_experiment(cfg);
  const auto& raw = res.raw.at("F");
  MomentSummary merged;
  for (std::size_t b = 0; b < 7; ++b) {
    const std::size_t lo = b * raw.size() / 7;
    const std::size_t hi = (b + 1) * raw.size() / 7;
    merged = merge(merged, summarize(std::span(raw).subspan(lo, hi - lo)));
  }
  const auto& s = res.summaries.at("F");
  CHECK(merged.mean == doctest::Approx(s.mean).epsilon(1e-12));
  for (int k = 2; k <= 6; ++k)
    CHECK(merged.moment(k) == doctest::Approx(s.moment(k)).epsilon(1e-9));
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.n = 10;
  cfg.cutoff = 20;
  CHECK_THROWS_AS(cfg.resolved(), std::invalid_argument);
  SimConfig cfg2;
  cfg2.n = 10;
  cfg2.replicates = 0;
  CHECK_THROWS_AS(cfg2.resolved(), std::invalid_argument);
  SimConfig ok;
  ok.n = 10;
  ok.replicates = 3;
  const SimConfig r = ok.resolved();
  CHECK(r.cutoff.value() == 4);  // ceil(sqrt(10))
  CHECK(r.store_raw.value());
  CHECK(run_experiment(ok).summaries.at("F").count == 3);
}
