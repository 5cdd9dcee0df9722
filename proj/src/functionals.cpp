#include "clades/functionals.hpp"

#include <algorithm>
#include <limits>

#include "clades/errors.hpp"

namespace clades {

int64_t CladeCensus::total() const {
  int64_t s = 0;
  for (const auto& [k, c] : counts) s += c;
  return s;
}

void SplitStats::reset(const Options& opt) {
  frames_.clear();
  tot_ = Totals{};
  cutoff_ = opt.cutoff < 0 ? std::numeric_limits<int64_t>::max() : opt.cutoff;
  chain_depth_ = std::min(opt.chain_depth, kMaxChainDepth);
  nu_ = opt.nu;
  nu_len_ = opt.nu_len;
  census_ = opt.census;
  maximal_sizes_ = opt.maximal_sizes;
  green_depth_ = 0;
  small_green_depth_ = 0;
}

void SplitStats::on_green_enter(int64_t m) {
  const bool at_root = frames_.empty();
  tot_.green++;
  const bool small = m <= cutoff_;
  if (!small) tot_.large_green++;
  if (census_ != nullptr) (*census_)[static_cast<std::size_t>(m)]++;
  if (green_depth_ == 0) {
    tot_.maximal_count++;
    tot_.maximal_external_sum += m + 1;
    if (maximal_sizes_ != nullptr) maximal_sizes_->push_back(m);
  }
  if (small && small_green_depth_ == 0) tot_.F_small_direct++;
  if (nu_ != nullptr) {
    const double g = 1.0 - nu_[m - 1];
    tot_.G += g;
    if (small)
      tot_.G_small += g;
    else
      tot_.G_large += g;
  }
  if (green_depth_ + 1 > tot_.max_green_chain) tot_.max_green_chain = green_depth_ + 1;
  if (at_root) tot_.root_green = true;
  if (chain_depth_ > 0) accumulate_chain_rows(green_depth_, at_root);
}

namespace {

// saturating a += b
inline void sat_add(uint64_t& a, uint64_t b, bool& overflow) {
  const uint64_t s = a + b;
  if (s < a) {
    a = std::numeric_limits<uint64_t>::max();
    overflow = true;
  } else {
    a = s;
  }
}

}  // namespace

void SplitStats::accumulate_chain_rows(int64_t d, bool at_root) {
  // F_k += C(d, k-1) for every green node
  uint64_t c = 1;
  sat_add(tot_.F_chains[0], 1, tot_.chain_overflow);
  for (int j = 1; j < chain_depth_; ++j) {
    if (j > d) break;  // C(d, j) = 0 beyond j = d
    const unsigned __int128 wide = static_cast<unsigned __int128>(c) *
                                   static_cast<unsigned __int128>(d - j + 1);
    const unsigned __int128 next = wide / static_cast<unsigned __int128>(j);
    if (next > std::numeric_limits<uint64_t>::max()) {
      tot_.chain_overflow = true;
      break;
    }
    c = static_cast<uint64_t>(next);
    sat_add(tot_.F_chains[j], c, tot_.chain_overflow);
  }
  // f_k += C(d-1, k-2) for green nodes below a green root (k >= 2);
  // the k = 1 entry is the root indicator, set in finish()
  if (tot_.root_green && !at_root) {
    uint64_t r = 1;
    sat_add(tot_.f_chains[1], 1, tot_.chain_overflow);
    for (int j = 1; j + 2 <= chain_depth_; ++j) {
      if (j > d - 1) break;
      const unsigned __int128 wide = static_cast<unsigned __int128>(r) *
                                     static_cast<unsigned __int128>(d - j);
      const unsigned __int128 next = wide / static_cast<unsigned __int128>(j);
      if (next > std::numeric_limits<uint64_t>::max()) {
        tot_.chain_overflow = true;
        break;
      }
      r = static_cast<uint64_t>(next);
      sat_add(tot_.f_chains[j + 1], r, tot_.chain_overflow);
    }
  }
}

SplitStats::Totals SplitStats::finish(int64_t n) {
  tot_.n = n;
  if (chain_depth_ > 0 && tot_.root_green) tot_.f_chains[0] = 1;
  return tot_;
}

namespace {

SplitStats::Totals run_over_tree(const BinaryTree& t, const SplitStats::Options& opt) {
  if (opt.nu != nullptr && opt.nu_len < t.size()) throw TableTooShortError(opt.nu_len - 1, t.size() - 1);
  if (opt.census != nullptr) opt.census->assign(static_cast<std::size_t>(t.size() + 1), 0);
  SplitStats stats(opt);
  walk_splits(t, stats);
  return stats.finish(t.size());
}

}  // namespace

SplitStats::Totals evaluate_tree(const BinaryTree& t, const SplitStats::Options& opt) {
  return run_over_tree(t, opt);
}

int64_t count_F(const BinaryTree& t) { return run_over_tree(t, {}).F; }

int64_t toll_f(const BinaryTree& t) {
  if (t.empty()) return 0;
  const auto root = t.root();
  const auto l = t.left(root);
  const auto r = t.right(root);
  if (l != BinaryTree::npos && r != BinaryTree::npos) return 0;
  const auto child = l != BinaryTree::npos ? l : r;
  if (child == BinaryTree::npos) return 1;  // single node
  SplitStats stats;
  walk_splits(t, stats, child);
  return 1 - stats.finish(t.subtree_size(child)).F;
}

int64_t count_F_small(const BinaryTree& t, int64_t cutoff) {
  SplitStats::Options opt;
  opt.cutoff = cutoff;
  return run_over_tree(t, opt).F_small_direct;
}

std::vector<int64_t> maximal_green(const BinaryTree& t) {
  std::vector<int64_t> sizes;
  SplitStats::Options opt;
  opt.maximal_sizes = &sizes;
  run_over_tree(t, opt);
  return sizes;
}

CladeCensus clade_census(const BinaryTree& t) {
  CladeCensus census;
  census.n = t.size();
  std::vector<int64_t> dense;
  SplitStats::Options opt;
  opt.census = &dense;
  run_over_tree(t, opt);
  for (std::size_t k = 0; k < dense.size(); ++k)
    if (dense[k] > 0) census.counts[static_cast<int64_t>(k)] = dense[k];
  return census;
}

Decomposition decompose(const BinaryTree& t, const std::vector<double>& nu, int64_t cutoff) {
  SplitStats::Options opt;
  opt.cutoff = cutoff;
  opt.nu = nu.data();
  opt.nu_len = static_cast<int64_t>(nu.size());
  const auto tot = run_over_tree(t, opt);
  Decomposition d;
  d.cutoff = cutoff;
  d.F = tot.F;
  d.F_small = tot.F_small;
  d.F_large = tot.F_large;
  d.G = tot.G;
  d.H = tot.H;
  d.G_small = tot.G_small;
  d.G_large = tot.G_large;
  d.H_small = tot.H_small;
  d.H_large = tot.H_large;
  return d;
}

ChainCounts count_chains(const BinaryTree& t, int depth) {
  depth = std::clamp(depth, 1, kMaxChainDepth);
  SplitStats::Options opt;
  opt.chain_depth = depth;
  const auto tot = run_over_tree(t, opt);
  ChainCounts cc;
  cc.depth = depth;
  cc.F_chains.assign(tot.F_chains.begin(), tot.F_chains.begin() + depth);
  cc.f_chains.assign(tot.f_chains.begin(), tot.f_chains.begin() + depth);
  cc.overflow = tot.chain_overflow;
  return cc;
}

}  // namespace clades
