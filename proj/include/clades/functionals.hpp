#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "clades/tree.hpp"

namespace clades {

using std::int64_t;
using std::uint64_t;

// A node is green when its outdegree is at most 1; its clade has
// subtree-size + 1 external nodes.
inline bool is_green(const BinaryTree& t, BinaryTree::index v) {
  const auto& nd = t.node(v);
  return nd.left == BinaryTree::npos || nd.right == BinaryTree::npos;
}

struct CladeCensus {
  int64_t n = 0;                      // tree size
  std::map<int64_t, int64_t> counts;  // subtree size k -> number of green nodes
  int64_t total() const;
};

inline constexpr int kMaxChainDepth = 64;

struct ChainCounts {
  int depth = 0;                  // requested K
  std::vector<uint64_t> F_chains; // F_k, k = 1..K (index k-1): green chains anywhere
  std::vector<uint64_t> f_chains; // f_k, k = 1..K: green chains starting at the root
  bool overflow = false;          // a binomial or sum saturated 64 bits
};

// Additive decomposition of F into the size-only part G and the centered
// remainder H, with cutoff-restricted variants at |T_v| <= N.
struct Decomposition {
  int64_t cutoff = 0;
  int64_t F = 0;
  int64_t F_small = 0;  // X^N
  int64_t F_large = 0;  // F - X^N, accumulated independently
  double G = 0, H = 0;
  double G_small = 0, G_large = 0;
  double H_small = 0, H_large = 0;
};

// Everything the library measures on one tree, computed in a single
// DFS pass over split decisions with O(depth) state. Works identically
// whether the events come from a materialized tree (walk_splits) or from
// the streaming generator (SplitStreamer), so huge trees never need to
// be materialized.
class SplitStats {
 public:
  struct Options {
    int64_t cutoff = -1;              // N; negative disables cutoff statistics
    int chain_depth = 0;              // K chain orders (0 = skip), capped at 64
    const double* nu = nullptr;       // enables G/H tolls; needs indices 0..n-1
    int64_t nu_len = 0;
    // dense green-size counts; must hold n+1 entries (evaluate_tree resizes it,
    // streaming callers size it themselves)
    std::vector<int64_t>* census = nullptr;
    std::vector<int64_t>* maximal_sizes = nullptr;  // subtree sizes of maximal green nodes
  };

  struct Totals {
    int64_t n = 0;
    int64_t F = 0;            // recursion (FT)
    int64_t toll_sum = 0;     // sum of tolls f(T_v); equals F
    int64_t F_small = 0;      // X^N as the additive sum of f restricted to small subtrees
    int64_t F_small_direct = 0;  // X^N by its direct definition
    int64_t F_large = 0;
    double G = 0, H = 0;
    double G_small = 0, G_large = 0;
    double H_small = 0, H_large = 0;
    int64_t green = 0;
    int64_t large_green = 0;  // green nodes with |T_v| > N (the census tail)
    int64_t maximal_count = 0;
    int64_t maximal_external_sum = 0;  // sum over maximal green of (|T_v| + 1)
    int64_t max_green_chain = 0;
    int64_t root_toll = 0;  // f(T) itself
    bool root_green = false;
    std::array<uint64_t, kMaxChainDepth> F_chains{};
    std::array<uint64_t, kMaxChainDepth> f_chains{};
    bool chain_overflow = false;
  };

  SplitStats() { reset(Options{}); }
  explicit SplitStats(const Options& opt) { reset(opt); }

  void reset(const Options& opt);

  void enter(int64_t m, int64_t left) {
    const int64_t right = m - 1 - left;
    const bool green = (left == 0) | (right == 0);
    if (green) on_green_enter(m);
    frames_.push_back({m, 0, green, green && m <= cutoff_});
    green_depth_ += green ? 1 : 0;
    small_green_depth_ += (green && m <= cutoff_) ? 1 : 0;
  }

  void enter(const SplitDecision& d) { enter(d.size, d.left_size); }

  void leave() {
    const Frame f = frames_.back();
    frames_.pop_back();
    int64_t F_v;
    int64_t toll;
    if (f.green) {
      F_v = 1;
      toll = 1 - f.child_F;
      green_depth_--;
      small_green_depth_ -= f.small_green ? 1 : 0;
      if (nu_ != nullptr) {
        const double h = f.m == 1 ? 0.0 : nu_[f.m - 1] - static_cast<double>(f.child_F);
        tot_.H += h;
        if (f.m <= cutoff_)
          tot_.H_small += h;
        else
          tot_.H_large += h;
      }
    } else {
      F_v = f.child_F;
      toll = 0;
    }
    tot_.toll_sum += toll;
    if (f.m <= cutoff_)
      tot_.F_small += toll;
    else
      tot_.F_large += toll;
    if (frames_.empty()) {
      tot_.F = F_v;
      tot_.root_toll = toll;
    } else {
      frames_.back().child_F += F_v;
    }
  }

  // n: total tree size (0 allowed). Call after the event stream completes.
  Totals finish(int64_t n);

 private:
  struct Frame {
    int64_t m;
    int64_t child_F;
    bool green;
    bool small_green;
  };

  void on_green_enter(int64_t m);
  void accumulate_chain_rows(int64_t d, bool at_root);

  std::vector<Frame> frames_;
  Totals tot_;
  int64_t cutoff_ = std::numeric_limits<int64_t>::max();
  int chain_depth_ = 0;
  const double* nu_ = nullptr;
  int64_t nu_len_ = 0;
  std::vector<int64_t>* census_ = nullptr;
  std::vector<int64_t>* maximal_sizes_ = nullptr;
  int64_t green_depth_ = 0;
  int64_t small_green_depth_ = 0;
};

// F(T): the number of maximal clades (green nodes with no green ancestor).
int64_t count_F(const BinaryTree& t);

// Toll f(T) = F(T) - F(T_L) - F(T_R).
int64_t toll_f(const BinaryTree& t);

// X^N: maximal small clades, by the direct definition (green v with
// |T_v| <= N and no green ancestor u with |T_u| <= N).
int64_t count_F_small(const BinaryTree& t, int64_t cutoff);

// Subtree sizes of the maximal green nodes, in DFS order.
std::vector<int64_t> maximal_green(const BinaryTree& t);

CladeCensus clade_census(const BinaryTree& t);

// Requires nu[0..|T|-1]; throws TableTooShortError otherwise.
Decomposition decompose(const BinaryTree& t, const std::vector<double>& nu, int64_t cutoff);

// Green-chain counts F_k and f_k for k = 1..depth (depth capped at 64).
ChainCounts count_chains(const BinaryTree& t, int depth);

// Full single-pass evaluation of a materialized tree.
SplitStats::Totals evaluate_tree(const BinaryTree& t, const SplitStats::Options& opt);

// Sum of an arbitrary toll over all fringe subtrees: sum_v toll(t, v).
template <class Toll>
auto sum_additive(const BinaryTree& t, Toll&& toll) -> decltype(toll(t, BinaryTree::index{0})) {
  using R = decltype(toll(t, BinaryTree::index{0}));
  R total{};
  if (t.empty()) return total;
  std::vector<BinaryTree::index> stack{t.root()};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    total += toll(t, v);
    if (t.left(v) != BinaryTree::npos) stack.push_back(t.left(v));
    if (t.right(v) != BinaryTree::npos) stack.push_back(t.right(v));
  }
  return total;
}

}  // namespace clades
