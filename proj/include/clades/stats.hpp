#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace clades {

// Replicate summary: count, mean, central power sums through order 6,
// extremes. Summaries merge pairwise (Pebay's update), so blocks computed
// by independent workers combine into exactly one result in a fixed order.
struct MomentSummary {
  std::string id;  // functional/config identity; merge refuses mismatches
  std::int64_t count = 0;
  double mean = 0.0;
  // central_sum[k] = sum over samples of (x - mean)^(k+2), k = 0..4
  double central_sum[5] = {0, 0, 0, 0, 0};
  double min = 0.0;
  double max = 0.0;

  double moment(int k) const;    // central moment m_k = central_sum[k-2]/count, k = 2..6
  double variance() const { return moment(2); }
  double stddev() const;
};

MomentSummary summarize(std::span<const double> values, std::string id = {});
MomentSummary merge(const MomentSummary& a, const MomentSummary& b);

// Two-pass E|x - mean|^p for real p, from raw values.
double abs_central_moment_raw(std::span<const double> values, double p);

struct Diagnostics {
  std::int64_t count = 0;
  double skewness = 0.0;         // m3 / m2^(3/2) of the standardized sample
  double excess_kurtosis = 0.0;  // m4 / m2^2 - 3
  double ks = 0.0;               // one-sample KS distance to N(0,1)
};

// Standardize values by (center, scale) and compare to the standard normal.
// Throws DegenerateSampleError when scale is not a positive finite number.
Diagnostics normality(std::span<const double> values, double center, double scale);

// Convenience: standardize by the sample's own mean and standard deviation.
Diagnostics normality_self(std::span<const double> values);

double std_normal_cdf(double z);

// One-sample KS distance of sorted-or-not values against a standard normal.
double ks_distance_normal(std::vector<double> standardized);

// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi_square_sf(double x, double dof);

// Pearson goodness-of-fit p-value; expected entries are probabilities
// summing to <= 1 (a remainder bucket is added when they sum below 1).
double chi_square_gof_pvalue(std::span<const std::int64_t> observed,
                             std::span<const double> expected_probs, std::int64_t total);

}  // namespace clades
