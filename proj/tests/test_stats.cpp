#include "clades/stats.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "clades/errors.hpp"
#include "clades/rng.hpp"
#include "doctest.h"

using namespace clades;

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("summarize and central moments") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MomentSummary s = summarize(v);
  CHECK(s.count == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.moment(2) == doctest::Approx(1.25));
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
}

TEST_CASE("merge identities") {
  SUBCASE("merge with empty is the identity") {
    const std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0};
    const MomentSummary s = summarize(v);
    const MomentSummary e;
    for (const auto& m : {merge(s, e), merge(e, s)}) {
      CHECK(m.count == s.count);
      CHECK(m.mean == s.mean);
      for (int k = 2; k <= 6; ++k) CHECK(m.moment(k) == doctest::Approx(s.moment(k)));
    }
  }
  SUBCASE("two singletons") {
    const double x = 2.0, y = 7.0;
    const MomentSummary m = merge(summarize(std::vector<double>{x}), summarize(std::vector<double>{y}));
    CHECK(m.count == 2);
    CHECK(m.mean == doctest::Approx((x + y) / 2));
    CHECK(m.central_sum[0] == doctest::Approx((x - y) * (x - y) / 2));
    CHECK(m.min == 2.0);
    CHECK(m.max == 7.0);
  }
  SUBCASE("block merge equals whole-set summary") {
    const auto v = normal_sample(10000, 99);
    const MomentSummary whole = summarize(v);
    MomentSummary merged;
    const std::size_t blocks = 7;
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = b * v.size() / blocks;
      const std::size_t hi = (b + 1) * v.size() / blocks;
      merged = merge(merged, summarize(std::span(v).subspan(lo, hi - lo)));
    }
    CHECK(merged.count == whole.count);
    CHECK(merged.mean == doctest::Approx(whole.mean).epsilon(1e-12));
    for (int k = 2; k <= 6; ++k)
      CHECK(merged.moment(k) == doctest::Approx(whole.moment(k)).epsilon(1e-9));
  }
  SUBCASE("identity mismatch is refused") {
    MomentSummary a = summarize(std::vector<double>{1.0}, "F@run1");
    MomentSummary b = summarize(std::vector<double>{2.0}, "G@run1");
    CHECK_THROWS_AS(merge(a, b), ConfigMismatchError);
  }
}

TEST_CASE("abs_central_moment_raw") {
  const std::vector<double> v{0.0, 2.0};  // mean 1, |d| = 1
  CHECK(abs_central_moment_raw(v, 2.5) == doctest::Approx(1.0));
  const std::vector<double> w{1.0, 1.0, 4.0};  // mean 2, |d| in {1,1,2}
  CHECK(abs_central_moment_raw(w, 3.0) == doctest::Approx((1.0 + 1.0 + 8.0) / 3));
}

TEST_CASE("ks distance on a degenerate point") {
  CHECK(ks_distance_normal({0.0}) == doctest::Approx(0.5));
}

TEST_CASE("normality on a true normal sample") {
  const auto v = normal_sample(1000000, 4242);
  const Diagnostics d = normality(v, 0.0, 1.0);
  CHECK(d.ks < 0.002);
  CHECK(std::abs(d.skewness) < 0.01);
  CHECK(std::abs(d.excess_kurtosis) < 0.02);

  const Diagnostics self = normality_self(v);
  CHECK(self.ks < 0.002);
}

TEST_CASE("normality rejects degenerate scales") {
  const std::vector<double> v{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(normality(v, 1.0, 0.0), DegenerateSampleError);
  const MomentSummary s = summarize(v);
  CHECK_THROWS_AS(normality(v, s.mean, s.stddev()), DegenerateSampleError);
}

TEST_CASE("chi_square_sf reference values") {
  // scipy.stats.chi2.sf
  CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_sf(16.918977604620448, 9) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_sf(31.41043284423092, 20) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_sf(2.0, 4) == doctest::Approx(0.7357588823428847).epsilon(1e-12));
  CHECK(chi_square_sf(0.5, 3) == doctest::Approx(0.9188914116546758).epsilon(1e-12));
  CHECK(chi_square_sf(0.0, 5) == 1.0);
}

TEST_CASE("chi_square_gof sanity") {
  RngStream rng(17, 0);
  const int bins = 6;
  std::vector<std::int64_t> counts(bins, 0);
  const std::int64_t R = 60000;
  for (std::int64_t i = 0; i < R; ++i) counts[static_cast<std::size_t>(rng.uniform_below(bins))]++;
  const std::vector<double> probs(bins, 1.0 / bins);
  const double p = chi_square_gof_pvalue(counts, probs, R);
  CHECK(p > 0.001);
  CHECK(p <= 1.0);

  // grossly wrong expectation gives a tiny p-value
  std::vector<double> bad(bins, 0.05);
  bad[0] = 0.75;
  CHECK(chi_square_gof_pvalue(counts, bad, R) < 1e-6);
}
