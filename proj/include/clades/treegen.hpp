#pragma once

#include <cstdint>
#include <vector>

#include "clades/rng.hpp"
#include "clades/tree.hpp"

namespace clades {

// Random binary search tree of n nodes via recursive uniform splits:
// at a subtree of size m the left subtree gets I uniform on {0,...,m-1}.
BinaryTree gen_bst_split(std::int64_t n, RngStream& rng);

// Same distribution, built independently: insert a uniformly random
// permutation of n keys into an initially empty search tree.
BinaryTree gen_bst_insert(std::int64_t n, RngStream& rng);

// Insert an explicit key sequence (a permutation of 1..n or any distinct keys).
BinaryTree bst_from_keys(const std::vector<std::int64_t>& keys);

// Size of the stopped branching-process tree T: P(|T| = n) = 2/((n+1)(n+2)),
// sampled by inverting the exact rational tail P(|T| > n) = 2/(n+2).
std::int64_t sample_ct_size(RngStream& rng);

// Grow the binary tree by exponential races, stopping at an independent
// rate-lambda clock: with a free child slots the next event is the stopping
// clock with probability lambda/(a+lambda), else a uniformly random free
// slot becomes a node. Returns T^lambda (T when lambda = 1). Throws
// CapExceededError if a birth would push the tree past cap nodes.
BinaryTree sample_ct_clock(double lambda, RngStream& rng, std::int64_t cap = 10'000'000);

// Default cap mirrors the sampler above.
inline constexpr std::int64_t kDefaultClockCap = 10'000'000;

// Streaming generation: produce the split-decision event stream of
// gen_bst_split(n) without materializing the tree. The sink sees the same
// enter/leave sequence as walk_splits on the materialized tree; state is
// O(depth). Owns its work stack so hot loops can reuse the allocation.
class SplitStreamer {
 public:
  template <class Sink>
  void run(std::int64_t n, RngStream& rng, Sink&& sink) {
    if (n <= 0) return;
    work_.clear();
    work_.push_back(n);
    while (!work_.empty()) {
      const std::int64_t m = work_.back();
      work_.pop_back();
      if (m < 0) {
        sink.leave();
        continue;
      }
      const auto i = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(m)));
      sink.enter(m, i);
      work_.push_back(-1);
      const std::int64_t r = m - 1 - i;
      if (r > 0) work_.push_back(r);
      if (i > 0) work_.push_back(i);
    }
  }

 private:
  std::vector<std::int64_t> work_;
};

}  // namespace clades
