#include "clades/enumerate.hpp"

#include <deque>
#include <mutex>

namespace clades {

namespace {

BinaryTree::index append_subtree(BinaryTree& dst, const BinaryTree& src) {
  if (src.empty()) return BinaryTree::npos;
  const auto base = static_cast<BinaryTree::index>(dst.size());
  for (BinaryTree::index i = 0; i < src.size(); ++i) {
    const auto& nd = src.node(i);
    const auto v = dst.add_node();
    dst.set_size(v, nd.size);
    if (nd.left != BinaryTree::npos) dst.set_left(v, nd.left + base);
    if (nd.right != BinaryTree::npos) dst.set_right(v, nd.right + base);
  }
  return base;
}

std::deque<std::vector<EnumeratedShape>>& shape_cache() {
  // deque keeps references to filled levels stable while new levels append
  static std::deque<std::vector<EnumeratedShape>> cache{
      {EnumeratedShape{BinaryTree{}, Rational(1)}}};
  return cache;
}

std::mutex cache_mutex;

// F and f by the direct recursion on the materialized shape
std::int64_t shape_F(const BinaryTree& t, BinaryTree::index v) {
  if (v == BinaryTree::npos) return 0;
  if (t.left(v) == BinaryTree::npos || t.right(v) == BinaryTree::npos) return 1;
  return shape_F(t, t.left(v)) + shape_F(t, t.right(v));
}

}  // namespace

const std::vector<EnumeratedShape>& enumerate_shapes(int n) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& cache = shape_cache();
  for (int m = static_cast<int>(cache.size()); m <= n; ++m) {
    std::vector<EnumeratedShape> shapes;
    for (int i = 0; i <= m - 1; ++i) {
      for (const auto& L : cache[static_cast<std::size_t>(i)]) {
        for (const auto& R : cache[static_cast<std::size_t>(m - 1 - i)]) {
          BinaryTree t;
          const auto root = t.add_node();
          t.set_size(root, m);
          t.set_left(root, append_subtree(t, L.tree));
          t.set_right(root, append_subtree(t, R.tree));
          shapes.push_back({std::move(t), L.prob * R.prob / m});
        }
      }
    }
    cache.push_back(std::move(shapes));
  }
  return cache[static_cast<std::size_t>(n)];
}

Rational enum_nu(int n) {
  Rational s(0);
  for (const auto& sh : enumerate_shapes(n)) s += sh.prob * shape_F(sh.tree, sh.tree.root());
  return s;
}

Rational enum_mu(int n) {
  Rational s(0);
  for (const auto& sh : enumerate_shapes(n)) {
    const auto& t = sh.tree;
    const auto F = shape_F(t, t.root());
    const auto toll = F - shape_F(t, t.left(t.root())) - shape_F(t, t.right(t.root()));
    s += sh.prob * toll;
  }
  return s;
}

std::map<std::int64_t, Rational> enum_f_dist(int n) {
  std::map<std::int64_t, Rational> out;
  for (const auto& sh : enumerate_shapes(n)) out[shape_F(sh.tree, sh.tree.root())] += sh.prob;
  return out;
}

Rational enum_EZ(int n, int k) {
  Rational s(0);
  for (const auto& sh : enumerate_shapes(n)) {
    const auto& t = sh.tree;
    std::int64_t count = 0;
    for (BinaryTree::index v = 0; v < t.size(); ++v)
      if (t.subtree_size(v) == k &&
          (t.left(v) == BinaryTree::npos || t.right(v) == BinaryTree::npos))
        ++count;
    s += sh.prob * count;
  }
  return s;
}

}  // namespace clades
