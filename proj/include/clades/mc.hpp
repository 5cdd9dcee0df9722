#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clades/exact.hpp"
#include "clades/stats.hpp"
#include "clades/treegen.hpp"

namespace clades {

enum class Model { bst_split, bst_insert, ct_clock };

const char* model_name(Model m);
std::optional<Model> model_from_name(const std::string& s);

// What to do when ct_clock hits its node cap: propagate the error with the
// replicate id, or count the event and redraw from the same stream (the
// resample count is reported in ExperimentResult::cap_exceeded).
enum class CapPolicy { propagate, resample };

struct SimConfig {
  Model model = Model::bst_split;
  std::int64_t n = 0;           // tree size for the bst models
  double lambda = 1.0;          // ct_clock stopping rate
  std::int64_t cap = kDefaultClockCap;
  CapPolicy cap_policy = CapPolicy::propagate;
  std::optional<std::int64_t> cutoff;  // N; defaults to ceil(sqrt(n)) for bst models
  int chain_depth = 20;                // K used when chains are recorded
  int chain_record = 0;                // record Fk/fk for k <= chain_record
  std::int64_t replicates = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  bool record_gh = false;  // G/H decompositions; needs prebuilt nu table
  std::vector<double> abs_p;
  std::optional<bool> store_raw;  // default: replicates <= 10^6

  // Fill defaulted fields (cutoff, store_raw, workers).
  SimConfig resolved() const;
  std::string signature() const;  // short identity string for merge checks
};

struct ExperimentResult {
  SimConfig config;  // fully resolved
  std::vector<std::string> keys;
  std::map<std::string, MomentSummary> summaries;
  std::map<std::string, std::vector<double>> raw;  // present when store_raw
  std::map<std::string, std::map<double, double>> abs_moments;
  std::int64_t cap_exceeded = 0;  // resampled or flagged replicates
};

// R independent replicates; replicate r draws from RngStream(seed, r), so
// results are identical for any worker count. Integer identities between
// the recorded functionals are spot-checked on ~1% of replicates.
// record_gh requires tables with nu covering every sampled tree.
ExperimentResult run_experiment(const SimConfig& config, const ExactTables* tables = nullptr);

struct TailRate {
  double rate = 0.0;        // fraction of replicates with F != X^N
  double se = 0.0;          // binomial standard error
  double exact_bound = 0.0; // sum_{k>N} E Z_{n,k}
  std::int64_t count = 0;
};

TailRate tail_event_rate(const SimConfig& config);

}  // namespace clades
