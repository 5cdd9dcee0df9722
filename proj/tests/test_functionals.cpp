#include "clades/functionals.hpp"

#include <cmath>

#include "clades/errors.hpp"
#include "clades/exact.hpp"
#include "clades/treegen.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace clades;

namespace {

BinaryTree path3() { return bst_from_keys({1, 2, 3}); }      // right path, all green
BinaryTree cherry() { return bst_from_keys({2, 1, 3}); }     // root with two leaf children
BinaryTree single() { return bst_from_keys({1}); }

// per-subtree toll f(T_v) computed the slow way, for sum_additive checks
std::int64_t slow_toll(const BinaryTree& t, BinaryTree::index v) { return oracle::ref_f(t, v); }

}  // namespace

TEST_CASE("is_green") {
  const BinaryTree p = path3();
  CHECK(is_green(p, p.root()));  // outdegree 1
  const BinaryTree c = cherry();
  CHECK_FALSE(is_green(c, c.root()));
  CHECK(is_green(c, c.left(c.root())));  // leaf
}

TEST_CASE("count_F on the named cases") {
  CHECK(count_F(BinaryTree{}) == 0);
  CHECK(count_F(single()) == 1);
  CHECK(count_F(cherry()) == 2);  // root not green, two green leaves
  CHECK(count_F(path3()) == 1);   // green root dominates
}

TEST_CASE("toll_f on the named cases") {
  CHECK(toll_f(BinaryTree{}) == 0);
  CHECK(toll_f(single()) == 1);
  CHECK(toll_f(path3()) == 0);   // 1 - F(path of 2) = 0
  CHECK(toll_f(cherry()) == 0);  // two children
}

TEST_CASE("sum_additive") {
  RngStream rng(12, 0);
  const BinaryTree t = gen_bst_split(150, rng);
  const auto f_sum =
      sum_additive(t, [](const BinaryTree& tr, BinaryTree::index v) { return slow_toll(tr, v); });
  CHECK(f_sum == count_F(t));
  const auto ones =
      sum_additive(t, [](const BinaryTree&, BinaryTree::index) { return std::int64_t{1}; });
  CHECK(ones == t.size());
  const auto leaves = sum_additive(t, [](const BinaryTree& tr, BinaryTree::index v) {
    return std::int64_t{tr.subtree_size(v) == 1 ? 1 : 0};
  });
  CHECK(leaves == clade_census(t).counts.at(1));
}

TEST_CASE("maximal_green") {
  CHECK(maximal_green(path3()) == std::vector<std::int64_t>{3});
  CHECK(maximal_green(cherry()) == std::vector<std::int64_t>{1, 1});
  CHECK(maximal_green(BinaryTree{}).empty());
}

TEST_CASE("clade_census") {
  const auto c1 = clade_census(path3());
  CHECK(c1.counts == std::map<std::int64_t, std::int64_t>{{1, 1}, {2, 1}, {3, 1}});
  const auto c2 = clade_census(cherry());
  CHECK(c2.counts == std::map<std::int64_t, std::int64_t>{{1, 2}});
  const auto c3 = clade_census(single());
  CHECK(c3.counts == std::map<std::int64_t, std::int64_t>{{1, 1}});
  CHECK(clade_census(BinaryTree{}).counts.empty());
}

TEST_CASE("count_F_small on the named cases") {
  const BinaryTree p = path3();
  CHECK(count_F_small(p, 3) == count_F(p));  // cutoff inactive
  CHECK(count_F_small(p, 2) == 1);           // the size-2 green node
  CHECK(count_F_small(p, 0) == 0);
}

TEST_CASE("decompose basics") {
  const ExactTables tables = build_mu_nu(64);
  const Decomposition d1 = decompose(single(), tables.nu, 1);
  CHECK(d1.G == doctest::Approx(1.0));
  CHECK(d1.H == doctest::Approx(0.0));
  CHECK(d1.F == 1);

  // path of 3, root term: g = 1 - nu_2 = 0
  const Decomposition d3 = decompose(path3(), tables.nu, 3);
  CHECK(d3.F == 1);
  CHECK(d3.G + d3.H == doctest::Approx(static_cast<double>(d3.F)).epsilon(1e-9));

  const std::vector<double> short_nu{0.0, 1.0};
  CHECK_THROWS_AS(decompose(path3(), short_nu, 3), TableTooShortError);
}

TEST_CASE("count_chains on the named cases") {
  const auto p = count_chains(path3(), 4);
  CHECK(p.F_chains == std::vector<std::uint64_t>{3, 3, 1, 0});
  CHECK(p.f_chains == std::vector<std::uint64_t>{1, 2, 1, 0});
  CHECK_FALSE(p.overflow);

  const auto c = count_chains(cherry(), 3);
  CHECK(c.f_chains == std::vector<std::uint64_t>{0, 0, 0});
  CHECK(c.F_chains == std::vector<std::uint64_t>{2, 0, 0});
}

TEST_CASE("chain counts match brute-force enumeration on small trees") {
  RngStream rng(5150, 0);
  for (int rep = 0; rep < 60; ++rep) {
    const auto n = 1 + static_cast<std::int64_t>(rng.uniform_below(12));
    const BinaryTree t = gen_bst_split(n, rng);
    const auto cc = count_chains(t, 8);
    for (int k = 1; k <= 8; ++k) {
      CHECK(cc.F_chains[static_cast<std::size_t>(k - 1)] ==
            static_cast<std::uint64_t>(oracle::ref_chains(t, k, false)));
      CHECK(cc.f_chains[static_cast<std::size_t>(k - 1)] ==
            static_cast<std::uint64_t>(oracle::ref_chains(t, k, true)));
    }
  }
}

TEST_CASE("exact integer identities on random trees") {
  RngStream size_rng(999, 0);
  const ExactTables tables = build_mu_nu(256);
  for (int rep = 0; rep < 3000; ++rep) {
    const auto n = 1 + static_cast<std::int64_t>(size_rng.uniform_below(200));
    RngStream rng(1234, static_cast<std::uint64_t>(rep));
    const BinaryTree t = gen_bst_split(n, rng);

    SplitStats::Options opt;
    opt.cutoff = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    opt.chain_depth = kMaxChainDepth;
    opt.nu = tables.nu.data();
    opt.nu_len = static_cast<std::int64_t>(tables.nu.size());
    const auto tot = evaluate_tree(t, opt);

    // F = sum of tolls
    CHECK(tot.F == tot.toll_sum);
    // F bounds and the root-green criterion
    CHECK(tot.F >= 0);
    CHECK(tot.F <= n);
    CHECK((tot.F == 1) == tot.root_green);
    // maximal clades partition the external nodes
    CHECK(tot.maximal_external_sum == n + 1);
    CHECK(tot.maximal_count == tot.F);
    // X^N: direct and additive routes agree, and F splits exactly
    CHECK(tot.F_small == tot.F_small_direct);
    CHECK(tot.F == tot.F_small + tot.F_large);
    for (const std::int64_t N : {std::int64_t{0}, std::int64_t{1}, n}) {
      CHECK(count_F_small(t, N) ==
            sum_additive(t, [&](const BinaryTree& tr, BinaryTree::index v) {
              return tr.subtree_size(v) <= N ? slow_toll(tr, v) : std::int64_t{0};
            }));
    }
    // alternating chain sums (Bonferroni-style cancellation)
    REQUIRE_FALSE(tot.chain_overflow);
    REQUIRE(tot.max_green_chain + 1 <= kMaxChainDepth);
    std::int64_t alt_F = 0, alt_f = 0;
    for (int k = 1; k <= kMaxChainDepth; ++k) {
      const auto sign = k % 2 == 1 ? 1 : -1;
      alt_F += sign * static_cast<std::int64_t>(tot.F_chains[static_cast<std::size_t>(k - 1)]);
      alt_f += sign * static_cast<std::int64_t>(tot.f_chains[static_cast<std::size_t>(k - 1)]);
    }
    CHECK(alt_F == tot.F);
    CHECK(alt_f == toll_f(t));
    // |f| <= |T|
    CHECK(std::abs(toll_f(t)) <= n);
    // decomposition closes within the floating tolerance
    CHECK(std::abs(tot.G + tot.H - static_cast<double>(tot.F)) <= 1e-6 * static_cast<double>(n + 1));
    CHECK(tot.G_small + tot.G_large == doctest::Approx(tot.G).epsilon(1e-9));
    CHECK(tot.H_small + tot.H_large == doctest::Approx(tot.H).epsilon(1e-9));
  }
}

TEST_CASE("count_F_small matches the reference implementation") {
  RngStream rng(314, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = 1 + static_cast<std::int64_t>(rng.uniform_below(40));
    RngStream gen(271, static_cast<std::uint64_t>(rep));
    const BinaryTree t = gen_bst_split(n, gen);
    for (const std::int64_t N : {std::int64_t{0}, std::int64_t{2}, n / 2, n}) {
      CHECK(count_F_small(t, N) == oracle::ref_F_small(t, N));
    }
  }
}

TEST_CASE("functionals agree with the reference on non-DFS-ordered arenas") {
  // insertion-built trees store nodes in key order, not DFS order
  RngStream rng(642, 0);
  for (int rep = 0; rep < 150; ++rep) {
    const auto n = 1 + static_cast<std::int64_t>(rng.uniform_below(60));
    RngStream gen(643, static_cast<std::uint64_t>(rep));
    const BinaryTree t = gen_bst_insert(n, gen);
    CHECK(count_F(t) == oracle::ref_F(t));
    CHECK(clade_census(t).counts == oracle::ref_census(t));
    CHECK(count_F_small(t, n / 2) == oracle::ref_F_small(t, n / 2));
  }
}

TEST_CASE("decompose accepts a nu table covering exactly |T|") {
  const std::vector<double> nu3{0.0, 1.0, 1.0};  // indices 0..2 for a 3-node tree
  const Decomposition d = decompose(path3(), nu3, 3);
  CHECK(d.F == 1);
  CHECK(std::abs(d.G + d.H - 1.0) < 1e-9);
}

TEST_CASE("sqrt-variance gap between F and G stays O(sqrt n)") {
  const FDist d = build_f_dist(512);
  ExactTables t = build_mu_nu(512);
  build_psi(512, t);
  for (const std::int64_t n : {64, 128, 256, 512}) {
    const double sd_F = std::sqrt(central_moment(n, 2, d));
    const double sd_G = std::sqrt(var_G_exact(n, t));
    CHECK(std::abs(sd_F - sd_G) <= std::sqrt(0.5 * static_cast<double>(n)));
  }
}

TEST_CASE("census totals count green nodes") {
  RngStream rng(8888, 0);
  const BinaryTree t = gen_bst_split(500, rng);
  const auto census = clade_census(t);
  const auto greens = sum_additive(t, [](const BinaryTree& tr, BinaryTree::index v) {
    return std::int64_t{is_green(tr, v) ? 1 : 0};
  });
  CHECK(census.total() == greens);
  CHECK(census.n == 500);
}
