#include "clades/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clades/errors.hpp"
#include "clades/kernels.hpp"

namespace clades {

double MomentSummary::moment(int k) const {
  if (k < 2 || k > 6) throw std::invalid_argument("MomentSummary::moment: k in [2,6]");
  if (count == 0) return 0.0;
  return central_sum[k - 2] / static_cast<double>(count);
}

double MomentSummary::stddev() const { return std::sqrt(variance()); }

MomentSummary summarize(std::span<const double> values, std::string id) {
  MomentSummary s;
  s.id = std::move(id);
  s.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return s;
  s.mean = kern::ksum(values.data(), values.size()) / static_cast<double>(values.size());
  kern::central_pow_sums(values.data(), values.size(), s.mean, s.central_sum);
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

namespace {

double ipow(double x, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= x;
  return p;
}

// binomial C(p, k) for tiny p
constexpr double kChoose[7][7] = {
    {1, 0, 0, 0, 0, 0, 0},      {1, 1, 0, 0, 0, 0, 0},      {1, 2, 1, 0, 0, 0, 0},
    {1, 3, 3, 1, 0, 0, 0},      {1, 4, 6, 4, 1, 0, 0},      {1, 5, 10, 10, 5, 1, 0},
    {1, 6, 15, 20, 15, 6, 1}};

}  // namespace

MomentSummary merge(const MomentSummary& a, const MomentSummary& b) {
  if (!a.id.empty() && !b.id.empty() && a.id != b.id)
    throw ConfigMismatchError("merge: summary identities differ: " + a.id + " vs " + b.id);
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  MomentSummary out;
  out.id = a.id.empty() ? b.id : a.id;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = na + nb;
  const double delta = b.mean - a.mean;
  out.count = a.count + b.count;
  out.mean = a.mean + delta * nb / n;
  // S_p = S_p^A + S_p^B
  //     + sum_{k=1}^{p-2} C(p,k) [(-nb d/n)^k S_{p-k}^A + (na d/n)^k S_{p-k}^B]
  //     + (na nb d / n)^p (1/nb^(p-1) - (-1/na)^(p-1))
  auto S = [&](const MomentSummary& s, int p) { return p < 2 ? 0.0 : s.central_sum[p - 2]; };
  for (int p = 2; p <= 6; ++p) {
    double v = S(a, p) + S(b, p);
    for (int k = 1; k <= p - 2; ++k)
      v += kChoose[p][k] *
           (ipow(-nb * delta / n, k) * S(a, p - k) + ipow(na * delta / n, k) * S(b, p - k));
    v += ipow(na * nb * delta / n, p) *
         (1.0 / ipow(nb, p - 1) - ipow(-1.0 / na, p - 1));
    out.central_sum[p - 2] = v;
  }
  out.min = std::min(a.min, b.min);
  out.max = std::max(a.max, b.max);
  return out;
}

double abs_central_moment_raw(std::span<const double> values, double p) {
  if (values.empty()) return 0.0;
  const double mean = kern::ksum(values.data(), values.size()) / static_cast<double>(values.size());
  double s = 0.0, c = 0.0;
  for (const double x : values) {
    const double y = std::pow(std::abs(x - mean), p) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s / static_cast<double>(values.size());
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ks_distance_normal(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const auto n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double cdf = std_normal_cdf(z[i]);
    d = std::max(d, std::max(cdf - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

Diagnostics normality(std::span<const double> values, double center, double scale) {
  if (values.empty()) throw std::invalid_argument("normality: empty sample");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DegenerateSampleError("normality: scale must be positive and finite");
  std::vector<double> z(values.begin(), values.end());
  for (auto& x : z) x = (x - center) / scale;
  const MomentSummary s = summarize(z);
  Diagnostics diag;
  diag.count = s.count;
  const double m2 = s.moment(2);
  diag.skewness = m2 > 0.0 ? s.moment(3) / std::pow(m2, 1.5) : 0.0;
  diag.excess_kurtosis = m2 > 0.0 ? s.moment(4) / (m2 * m2) - 3.0 : 0.0;
  diag.ks = ks_distance_normal(std::move(z));
  return diag;
}

Diagnostics normality_self(std::span<const double> values) {
  const MomentSummary s = summarize(values);
  return normality(values, s.mean, s.stddev());
}

namespace {

// Regularized incomplete gamma Q(a, x), by series (x < a+1) or continued
// fraction (x >= a+1); the standard pair of expansions.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Lentz's continued fraction for Q
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - lg);
}

}  // namespace

double chi_square_sf(double x, double dof) {
  if (dof <= 0.0) throw std::invalid_argument("chi_square_sf: dof must be > 0");
  if (x <= 0.0) return 1.0;
  return gamma_q(dof / 2.0, x / 2.0);
}

double chi_square_gof_pvalue(std::span<const std::int64_t> observed,
                             std::span<const double> expected_probs, std::int64_t total) {
  if (observed.size() != expected_probs.size())
    throw std::invalid_argument("chi_square_gof_pvalue: size mismatch");
  double prob_sum = 0.0;
  for (const double p : expected_probs) prob_sum += p;
  std::int64_t seen = 0;
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probs[i] * static_cast<double>(total);
    const double d = static_cast<double>(observed[i]) - e;
    if (e > 0.0) stat += d * d / e;
    seen += observed[i];
  }
  int dof = static_cast<int>(observed.size()) - 1;
  if (prob_sum < 1.0 - 1e-12) {
    // remainder bucket for mass beyond the listed categories
    const double e = (1.0 - prob_sum) * static_cast<double>(total);
    const double d = static_cast<double>(total - seen) - e;
    if (e > 0.0) stat += d * d / e;
    dof += 1;
  }
  return chi_square_sf(stat, static_cast<double>(dof));
}

}  // namespace clades
