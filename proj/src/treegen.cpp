#include "clades/treegen.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "clades/errors.hpp"

namespace clades {

BinaryTree gen_bst_split(std::int64_t n, RngStream& rng) {
  BinaryTree t;
  if (n <= 0) return t;
  t.reserve(n);
  // frames: (parent index, is_left, size of the pending subtree)
  struct Pending {
    BinaryTree::index parent;
    bool is_left;
    std::int64_t size;
  };
  std::vector<Pending> stack;
  stack.push_back({BinaryTree::npos, false, n});
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const BinaryTree::index v = t.add_node();
    t.set_size(v, p.size);
    if (p.parent != BinaryTree::npos) {
      if (p.is_left)
        t.set_left(p.parent, v);
      else
        t.set_right(p.parent, v);
    }
    const auto i = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(p.size)));
    const std::int64_t r = p.size - 1 - i;
    // push right first so the left subtree is materialized next (DFS pre-order)
    if (r > 0) stack.push_back({v, false, r});
    if (i > 0) stack.push_back({v, true, i});
  }
  return t;
}

BinaryTree bst_from_keys(const std::vector<std::int64_t>& keys) {
  BinaryTree t;
  if (keys.empty()) return t;
  t.reserve(static_cast<std::int64_t>(keys.size()));
  std::vector<std::int64_t> key_of;  // key stored at each node
  key_of.reserve(keys.size());
  t.add_node();
  key_of.push_back(keys[0]);
  for (std::size_t i = 1; i < keys.size(); ++i) {
    const std::int64_t k = keys[i];
    BinaryTree::index v = t.root();
    for (;;) {
      if (k < key_of[static_cast<std::size_t>(v)]) {
        if (t.left(v) == BinaryTree::npos) {
          const BinaryTree::index c = t.add_node();
          key_of.push_back(k);
          t.set_left(v, c);
          break;
        }
        v = t.left(v);
      } else {
        if (t.right(v) == BinaryTree::npos) {
          const BinaryTree::index c = t.add_node();
          key_of.push_back(k);
          t.set_right(v, c);
          break;
        }
        v = t.right(v);
      }
    }
  }
  t.recompute_sizes();
  return t;
}

BinaryTree gen_bst_insert(std::int64_t n, RngStream& rng) {
  std::vector<std::int64_t> keys(static_cast<std::size_t>(n));
  std::iota(keys.begin(), keys.end(), 1);
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(keys[static_cast<std::size_t>(i)], keys[static_cast<std::size_t>(j)]);
  }
  return bst_from_keys(keys);
}

std::int64_t sample_ct_size(RngStream& rng) {
  // P(|T| <= n) = n/(n+2); smallest n with U < CDF(n) is floor(2U/(1-U)) + 1
  const double u = rng.uniform01();
  const double x = 2.0 * u / (1.0 - u);
  auto n = static_cast<std::int64_t>(std::floor(x)) + 1;
  return n < 1 ? 1 : n;
}

BinaryTree sample_ct_clock(double lambda, RngStream& rng, std::int64_t cap) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_ct_clock: lambda must be > 0");
  if (cap < 1 || cap > std::numeric_limits<std::int32_t>::max())
    throw std::invalid_argument("sample_ct_clock: cap must be in [1, 2^31)");
  BinaryTree t;
  t.add_node();
  // free child slots as (parent, is_left); root starts with both open
  std::vector<std::pair<BinaryTree::index, bool>> slots;
  slots.reserve(64);
  slots.emplace_back(0, true);
  slots.emplace_back(0, false);
  for (;;) {
    const auto a = static_cast<double>(slots.size());
    if (rng.uniform01() < lambda / (a + lambda)) break;  // stopping clock wins the race
    if (t.size() >= cap) throw CapExceededError(cap);
    const auto j = static_cast<std::size_t>(rng.uniform_below(slots.size()));
    const auto [parent, is_left] = slots[j];
    const BinaryTree::index c = t.add_node();
    if (is_left)
      t.set_left(parent, c);
    else
      t.set_right(parent, c);
    slots[j] = {c, true};
    slots.emplace_back(c, false);
  }
  t.recompute_sizes();
  return t;
}

}  // namespace clades
