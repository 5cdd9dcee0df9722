#include "clades/treegen.hpp"

#include <map>
#include <vector>

#include "clades/errors.hpp"
#include "clades/functionals.hpp"
#include "clades/stats.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace clades;

namespace {

// observed counts per enumerated shape of size n, via a generator callback
template <class Gen>
double shape_gof_pvalue(int n, std::int64_t draws, Gen&& gen) {
  const auto& shapes = oracle::enumerate_bst(n);
  std::map<std::string, std::size_t> index;
  std::vector<double> probs;
  for (const auto& sh : shapes) {
    index[oracle::shape_key(sh.tree)] = probs.size();
    probs.push_back(static_cast<double>(sh.prob));
  }
  std::vector<std::int64_t> counts(probs.size(), 0);
  for (std::int64_t i = 0; i < draws; ++i) {
    const BinaryTree t = gen(i);
    counts[index.at(oracle::shape_key(t))]++;
  }
  return chi_square_gof_pvalue(counts, probs, draws);
}

}  // namespace

TEST_CASE("gen_bst_split basics") {
  RngStream rng(100, 0);
  CHECK(gen_bst_split(0, rng).empty());

  const BinaryTree one = gen_bst_split(1, rng);
  CHECK(one.size() == 1);
  CHECK(one.left(one.root()) == BinaryTree::npos);
  CHECK(one.right(one.root()) == BinaryTree::npos);

  // cached sizes match a recomputation
  BinaryTree t = gen_bst_split(257, rng);
  std::vector<std::int64_t> before;
  for (BinaryTree::index v = 0; v < t.size(); ++v) before.push_back(t.subtree_size(v));
  t.recompute_sizes();
  for (BinaryTree::index v = 0; v < t.size(); ++v) CHECK(t.subtree_size(v) == before[static_cast<std::size_t>(v)]);
}

TEST_CASE("gen_bst_split: n=2 shapes are equally likely") {
  const std::int64_t R = 100000;
  std::int64_t left_path = 0;
  for (std::int64_t i = 0; i < R; ++i) {
    RngStream rng(2222, static_cast<std::uint64_t>(i));
    const BinaryTree t = gen_bst_split(2, rng);
    REQUIRE(t.size() == 2);
    left_path += t.left(t.root()) != BinaryTree::npos ? 1 : 0;
  }
  // 3 SE band around R/2
  const double se = std::sqrt(0.25 * static_cast<double>(R));
  CHECK(std::abs(static_cast<double>(left_path) - R / 2.0) < 3.0 * se);
}

TEST_CASE("shape distribution matches enumeration for n <= 6") {
  RngStream rng(31337, 0);
  for (int n = 2; n <= 6; ++n) {
    const double p =
        shape_gof_pvalue(n, 1000000, [&](std::int64_t) { return gen_bst_split(n, rng); });
    CHECK(p > 0.001);
  }
}

TEST_CASE("insertion model: fixed permutations") {
  const BinaryTree t1 = bst_from_keys({2, 1, 3});
  REQUIRE(t1.size() == 3);
  CHECK(t1.left(t1.root()) != BinaryTree::npos);
  CHECK(t1.right(t1.root()) != BinaryTree::npos);

  const BinaryTree t2 = bst_from_keys({1, 2, 3});
  REQUIRE(t2.size() == 3);
  CHECK(t2.left(t2.root()) == BinaryTree::npos);
  const auto r = t2.right(t2.root());
  REQUIRE(r != BinaryTree::npos);
  CHECK(t2.left(r) == BinaryTree::npos);
  CHECK(t2.right(r) != BinaryTree::npos);
  CHECK(t2.subtree_size(t2.root()) == 3);
}

TEST_CASE("insertion model matches the split model at n=3") {
  RngStream rng(99, 5);
  const double p = shape_gof_pvalue(3, 1000000, [&](std::int64_t) { return gen_bst_insert(3, rng); });
  CHECK(p > 0.001);
}

TEST_CASE("sample_ct_size follows the closed-form law") {
  RngStream rng(404, 0);
  const std::int64_t R = 1000000;
  std::int64_t c1 = 0, c2 = 0, tail10 = 0;
  for (std::int64_t i = 0; i < R; ++i) {
    const auto n = sample_ct_size(rng);
    REQUIRE(n >= 1);
    c1 += n == 1;
    c2 += n == 2;
    tail10 += n > 10;
  }
  auto band = [&](std::int64_t count, double p) {
    const double se = std::sqrt(p * (1 - p) * static_cast<double>(R));
    return std::abs(static_cast<double>(count) - p * static_cast<double>(R)) < 3.0 * se;
  };
  CHECK(band(c1, 1.0 / 3.0));          // P(n=1) = 2/(2*3)
  CHECK(band(c2, 1.0 / 6.0));          // P(n=2) = 2/(3*4)
  CHECK(band(tail10, 2.0 / 12.0));     // P(n > 10) = 2/(10+2)
}

TEST_CASE("sample_ct_clock size law and cap") {
  SUBCASE("P(|tree|=1) = lambda/(lambda+2)") {
    const std::int64_t R = 200000;
    for (const double lambda : {1.0, 2.0}) {
      std::int64_t ones = 0;
      for (std::int64_t i = 0; i < R; ++i) {
        RngStream rng(7000 + static_cast<std::uint64_t>(lambda), static_cast<std::uint64_t>(i));
        ones += sample_ct_clock(lambda, rng).size() == 1;
      }
      const double p = lambda / (lambda + 2.0);
      const double se = std::sqrt(p * (1 - p) * static_cast<double>(R));
      CHECK(std::abs(static_cast<double>(ones) - p * static_cast<double>(R)) < 4.0 * se);
    }
  }
  SUBCASE("cap=1 returns the root or throws") {
    std::int64_t returned = 0, thrown = 0;
    const std::int64_t R = 30000;
    for (std::int64_t i = 0; i < R; ++i) {
      RngStream rng(8, static_cast<std::uint64_t>(i));
      try {
        const BinaryTree t = sample_ct_clock(1.0, rng, 1);
        CHECK(t.size() == 1);
        ++returned;
      } catch (const CapExceededError& e) {
        CHECK(e.cap == 1);
        ++thrown;
      }
    }
    CHECK(returned + thrown == R);
    const double se = std::sqrt((1.0 / 3) * (2.0 / 3) * static_cast<double>(R));
    CHECK(std::abs(static_cast<double>(returned) - R / 3.0) < 4.0 * se);
  }
  SUBCASE("invalid arguments") {
    RngStream rng(1, 1);
    CHECK_THROWS_AS(sample_ct_clock(0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_ct_clock(1.0, rng, 0), std::invalid_argument);
  }
}

TEST_CASE("clock tree conditioned on its size has the split-model shape law") {
  for (int n = 2; n <= 3; ++n) {
    std::int64_t draws_used = 0;
    const std::int64_t target = 30000;
    const auto gen = [&](std::int64_t) {
      for (;;) {
        RngStream rng(515, static_cast<std::uint64_t>(draws_used++));
        try {
          const BinaryTree t = sample_ct_clock(1.0, rng, 100000);
          if (t.size() == n) return t;
        } catch (const CapExceededError&) {
          // rare giant tree; it cannot be a size-n hit anyway
        }
      }
    };
    const double p = shape_gof_pvalue(n, target, gen);
    CHECK(p > 0.001);
  }
}

TEST_CASE("streaming generator replays the materialized generator") {
  for (const std::int64_t n : {1, 2, 3, 10, 257, 5000}) {
    RngStream rng_a(77, static_cast<std::uint64_t>(n));
    RngStream rng_b(77, static_cast<std::uint64_t>(n));
    const BinaryTree t = gen_bst_split(n, rng_a);

    SplitStats::Options opt;
    opt.cutoff = n / 2;
    SplitStats stream_stats(opt);
    SplitStreamer streamer;
    streamer.run(n, rng_b, stream_stats);
    const auto streamed = stream_stats.finish(n);

    const auto walked = evaluate_tree(t, opt);
    CHECK(streamed.F == walked.F);
    CHECK(streamed.toll_sum == walked.toll_sum);
    CHECK(streamed.F_small == walked.F_small);
    CHECK(streamed.F_small_direct == walked.F_small_direct);
    CHECK(streamed.green == walked.green);
    CHECK(streamed.maximal_count == walked.maximal_count);
    CHECK(streamed.maximal_external_sum == walked.maximal_external_sum);
    CHECK(rng_a.position() == rng_b.position());
  }
}
