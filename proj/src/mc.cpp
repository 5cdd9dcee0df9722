#include "clades/mc.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "clades/errors.hpp"
#include "clades/functionals.hpp"

namespace clades {

const char* model_name(Model m) {
  switch (m) {
    case Model::bst_split: return "bst-split";
    case Model::bst_insert: return "bst-insert";
    case Model::ct_clock: return "ct-clock";
  }
  return "?";
}

std::optional<Model> model_from_name(const std::string& s) {
  if (s == "bst-split") return Model::bst_split;
  if (s == "bst-insert") return Model::bst_insert;
  if (s == "ct-clock") return Model::ct_clock;
  return std::nullopt;
}

SimConfig SimConfig::resolved() const {
  SimConfig c = *this;
  if (c.model != Model::ct_clock && c.n < 0) throw std::invalid_argument("SimConfig: n must be >= 0");
  if (c.replicates < 1) throw std::invalid_argument("SimConfig: replicates must be >= 1");
  if (c.chain_depth < 0 || c.chain_depth > kMaxChainDepth)
    throw std::invalid_argument("SimConfig: chain depth must be in [0, 64]");
  if (c.chain_record > c.chain_depth) c.chain_record = c.chain_depth;
  if (!c.cutoff.has_value() && c.model != Model::ct_clock)
    c.cutoff = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(c.n))));
  if (c.cutoff.has_value() && c.model != Model::ct_clock && *c.cutoff > c.n)
    throw std::invalid_argument("SimConfig: cutoff must be <= n");
  if (!c.store_raw.has_value()) c.store_raw = c.replicates <= 1'000'000;
  if (c.workers < 1) c.workers = 1;
  return c;
}

std::string SimConfig::signature() const {
  std::ostringstream os;
  os << model_name(model) << ":n=" << n << ":N=" << (cutoff ? *cutoff : -1)
     << ":K=" << chain_depth << ":lambda=" << lambda << ":R=" << replicates << ":seed=" << seed;
  return os.str();
}

namespace {

struct KeyPlan {
  std::vector<std::string> keys;
  bool has_cutoff = false;
  bool gh = false;
  bool size_key = false;
  int chain_record = 0;
};

KeyPlan plan_keys(const SimConfig& c) {
  KeyPlan p;
  p.has_cutoff = c.cutoff.has_value();
  p.gh = c.record_gh;
  p.size_key = c.model == Model::ct_clock;
  p.chain_record = c.chain_record;
  p.keys.push_back("F");
  if (p.has_cutoff) {
    p.keys.push_back("XN");
    p.keys.push_back("Fpp");
    p.keys.push_back("Fneq");
    p.keys.push_back("Ztail");
  }
  if (p.gh) {
    for (const char* k : {"G", "H", "Gp", "Gpp", "Hp", "Hpp"}) p.keys.push_back(k);
  }
  if (p.size_key) p.keys.push_back("size");
  for (int k = 1; k <= p.chain_record; ++k) p.keys.push_back("Fk_" + std::to_string(k));
  for (int k = 1; k <= p.chain_record; ++k) p.keys.push_back("fk_" + std::to_string(k));
  return p;
}

// sanity identities checked on ~1% of replicates
void spot_check(const SplitStats::Totals& t) {
  const bool ok = t.F == t.toll_sum && t.F_small == t.F_small_direct &&
                  t.F == t.F_small + t.F_large &&
                  (t.n == 0 || t.maximal_external_sum == t.n + 1);
  if (!ok) throw std::logic_error("mc: functional identities violated on a replicate");
}

constexpr std::int64_t kBlockSize = 1024;

}  // namespace

ExperimentResult run_experiment(const SimConfig& raw_config, const ExactTables* tables) {
  const SimConfig cfg = raw_config.resolved();
  if (cfg.record_gh && tables == nullptr)
    throw std::invalid_argument("run_experiment: record_gh requires prebuilt tables");
  const KeyPlan plan = plan_keys(cfg);
  const std::int64_t R = cfg.replicates;
  const auto nkeys = plan.keys.size();
  const std::int64_t nblocks = (R + kBlockSize - 1) / kBlockSize;

  ExperimentResult result;
  result.config = cfg;
  result.keys = plan.keys;
  const bool keep_raw = *cfg.store_raw;
  if (keep_raw)
    for (const auto& k : plan.keys) result.raw[k].resize(static_cast<std::size_t>(R));

  std::vector<std::vector<MomentSummary>> block_sums(static_cast<std::size_t>(nblocks));
  std::atomic<std::int64_t> next_block{0};
  std::atomic<std::int64_t> capped{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    SplitStreamer streamer;
    SplitStats stats;
    SplitStats::Options opt;
    opt.cutoff = cfg.cutoff.value_or(-1);
    opt.chain_depth = cfg.chain_record > 0 ? cfg.chain_depth : 0;
    if (cfg.record_gh) {
      opt.nu = tables->nu.data();
      opt.nu_len = static_cast<std::int64_t>(tables->nu.size());
    }
    std::vector<std::vector<double>> block(nkeys);
    try {
      for (;;) {
        const std::int64_t b = next_block.fetch_add(1);
        if (b >= nblocks) break;
        const std::int64_t lo = b * kBlockSize;
        const std::int64_t hi = std::min(R, lo + kBlockSize);
        const auto len = static_cast<std::size_t>(hi - lo);
        for (auto& v : block) v.assign(len, 0.0);
        for (std::int64_t r = lo; r < hi; ++r) {
          RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
          SplitStats::Totals t;
          std::int64_t tree_size = cfg.n;
          if (cfg.model == Model::bst_split) {
            stats.reset(opt);
            streamer.run(cfg.n, rng, stats);
            t = stats.finish(cfg.n);
          } else if (cfg.model == Model::bst_insert) {
            const BinaryTree tree = gen_bst_insert(cfg.n, rng);
            if (cfg.record_gh && tree.size() > tables->nmax)
              throw TableTooShortError(tables->nmax, tree.size());
            stats.reset(opt);
            walk_splits(tree, stats);
            t = stats.finish(tree.size());
          } else {
            BinaryTree tree;
            for (;;) {
              try {
                tree = sample_ct_clock(cfg.lambda, rng, cfg.cap);
                break;
              } catch (const CapExceededError&) {
                if (cfg.cap_policy == CapPolicy::propagate) throw CapExceededError(cfg.cap, r);
                capped.fetch_add(1);
                continue;  // resample: the stream keeps advancing, so the redraw is deterministic
              }
            }
            if (cfg.record_gh && tree.size() > tables->nmax)
              throw TableTooShortError(tables->nmax, tree.size());
            tree_size = tree.size();
            stats.reset(opt);
            walk_splits(tree, stats);
            t = stats.finish(tree.size());
          }
          if (r % 97 == 0) spot_check(t);
          const auto i = static_cast<std::size_t>(r - lo);
          std::size_t c = 0;
          block[c++][i] = static_cast<double>(t.F);
          if (plan.has_cutoff) {
            block[c++][i] = static_cast<double>(t.F_small);
            block[c++][i] = static_cast<double>(t.F_large);
            block[c++][i] = t.F != t.F_small ? 1.0 : 0.0;
            block[c++][i] = static_cast<double>(t.large_green);
          }
          if (plan.gh) {
            block[c++][i] = t.G;
            block[c++][i] = t.H;
            block[c++][i] = t.G_small;
            block[c++][i] = t.G_large;
            block[c++][i] = t.H_small;
            block[c++][i] = t.H_large;
          }
          if (plan.size_key) block[c++][i] = static_cast<double>(tree_size);
          for (int k = 1; k <= plan.chain_record; ++k)
            block[c++][i] = static_cast<double>(t.F_chains[static_cast<std::size_t>(k - 1)]);
          for (int k = 1; k <= plan.chain_record; ++k)
            block[c++][i] = static_cast<double>(t.f_chains[static_cast<std::size_t>(k - 1)]);
        }
        auto& sums = block_sums[static_cast<std::size_t>(b)];
        sums.resize(nkeys);
        for (std::size_t k = 0; k < nkeys; ++k) {
          sums[k] = summarize(block[k], plan.keys[k] + "@" + cfg.signature());
          if (keep_raw)
            std::copy(block[k].begin(), block[k].end(),
                      result.raw[plan.keys[k]].begin() + lo);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (cfg.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(cfg.workers));
    for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t k = 0; k < nkeys; ++k) {
    MomentSummary total;
    for (std::int64_t b = 0; b < nblocks; ++b)
      total = merge(total, block_sums[static_cast<std::size_t>(b)][k]);
    result.summaries[plan.keys[k]] = total;
  }
  if (keep_raw && !cfg.abs_p.empty()) {
    for (const auto& key : plan.keys) {
      auto& dest = result.abs_moments[key];
      for (const double p : cfg.abs_p) dest[p] = abs_central_moment_raw(result.raw[key], p);
    }
  }
  result.cap_exceeded = capped.load();
  return result;
}

TailRate tail_event_rate(const SimConfig& config) {
  SimConfig cfg = config.resolved();
  cfg.record_gh = false;
  cfg.chain_record = 0;
  cfg.store_raw = false;
  const ExperimentResult res = run_experiment(cfg);
  TailRate out;
  const MomentSummary& s = res.summaries.at("Fneq");
  out.count = s.count;
  out.rate = s.mean;
  out.se = std::sqrt(std::max(0.0, out.rate * (1.0 - out.rate) / static_cast<double>(s.count)));
  out.exact_bound = expected_Zk_tail(cfg.n, cfg.cutoff.value_or(cfg.n));
  return out;
}

}  // namespace clades
