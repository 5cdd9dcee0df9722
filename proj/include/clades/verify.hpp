#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace clades {

// One verification criterion: id 1..12, the sub-check details, and a verdict.
struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool quick = false;          // reduced replicate counts; identical thresholds
  int threads = 0;             // 0: hardware concurrency
  std::uint64_t seed = 20250809;
};

// Runs the twelve verification criteria, printing one PASS/FAIL line per
// criterion to `progress` as it completes. Returns all results.
std::vector<CheckResult> run_verification(const VerifyOptions& options, std::ostream& progress);

}  // namespace clades
