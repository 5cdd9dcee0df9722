#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace clades {

// Rooted binary tree in an index arena. Children are left/right
// distinguished (mirror trees are distinct); subtree sizes are cached per
// node. Node 0 is the root of a nonempty tree. All traversal here and in
// the rest of the library uses explicit stacks: a degenerate tree has
// depth O(n) and must not touch the call stack.
class BinaryTree {
 public:
  using index = std::int32_t;
  static constexpr index npos = -1;

  struct Node {
    index left = npos;
    index right = npos;
    std::int32_t size = 1;
  };

  BinaryTree() = default;

  bool empty() const { return nodes_.empty(); }
  std::int64_t size() const { return static_cast<std::int64_t>(nodes_.size()); }
  index root() const { return nodes_.empty() ? npos : 0; }

  const Node& node(index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  index left(index i) const { return node(i).left; }
  index right(index i) const { return node(i).right; }
  std::int64_t subtree_size(index i) const { return i == npos ? 0 : node(i).size; }

  index add_node() {
    nodes_.emplace_back();
    return static_cast<index>(nodes_.size() - 1);
  }
  void set_left(index parent, index child) { nodes_[static_cast<std::size_t>(parent)].left = child; }
  void set_right(index parent, index child) {
    nodes_[static_cast<std::size_t>(parent)].right = child;
  }
  void set_size(index i, std::int64_t s) {
    nodes_[static_cast<std::size_t>(i)].size = static_cast<std::int32_t>(s);
  }
  void reserve(std::int64_t n) { nodes_.reserve(static_cast<std::size_t>(n)); }
  void clear() { nodes_.clear(); }

  // Recompute cached sizes bottom-up (iterative post-order).
  void recompute_sizes();

  std::int64_t height() const;  // nodes on the longest root path; 0 for empty

 private:
  std::vector<Node> nodes_;
};

// Split decision at one node: subtree of `size` nodes puts `left_size`
// of the remaining size-1 nodes in the left subtree.
struct SplitDecision {
  std::int64_t size;
  std::int64_t left_size;
  std::int64_t right_size() const { return size - 1 - left_size; }
};

// Drive a sink through the tree's split decisions in DFS order:
// sink.enter(size, left_size) pre-order, sink.leave() post-order.
// This is the same event stream the streaming generator produces.
template <class Sink>
void walk_splits(const BinaryTree& t, Sink&& sink, BinaryTree::index start = 0) {
  if (t.empty()) return;
  std::vector<BinaryTree::index> stack;
  stack.push_back(start == 0 ? t.root() : start);
  while (!stack.empty()) {
    const BinaryTree::index i = stack.back();
    stack.pop_back();
    if (i == BinaryTree::npos) {
      sink.leave();
      continue;
    }
    const auto& nd = t.node(i);
    sink.enter(nd.size, t.subtree_size(nd.left));
    stack.push_back(BinaryTree::npos);  // leave marker
    if (nd.right != BinaryTree::npos) stack.push_back(nd.right);
    if (nd.left != BinaryTree::npos) stack.push_back(nd.left);
  }
}

}  // namespace clades
