#include "clades/tree.hpp"

#include <algorithm>

namespace clades {

void BinaryTree::recompute_sizes() {
  if (nodes_.empty()) return;
  // post-order: children are finished before their parent
  std::vector<index> stack, order;
  stack.reserve(64);
  order.reserve(nodes_.size());
  stack.push_back(root());
  while (!stack.empty()) {
    const index i = stack.back();
    stack.pop_back();
    order.push_back(i);
    const Node& nd = node(i);
    if (nd.left != npos) stack.push_back(nd.left);
    if (nd.right != npos) stack.push_back(nd.right);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node& nd = nodes_[static_cast<std::size_t>(*it)];
    nd.size = static_cast<std::int32_t>(1 + subtree_size(nd.left) + subtree_size(nd.right));
  }
}

std::int64_t BinaryTree::height() const {
  if (nodes_.empty()) return 0;
  std::vector<std::pair<index, std::int64_t>> stack;
  stack.emplace_back(root(), 1);
  std::int64_t best = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const Node& nd = node(i);
    if (nd.left != npos) stack.emplace_back(nd.left, d + 1);
    if (nd.right != npos) stack.emplace_back(nd.right, d + 1);
  }
  return best;
}

}  // namespace clades
