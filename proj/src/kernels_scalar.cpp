#include "clades/kernels.hpp"

#include <cmath>

namespace clades::kern::detail {

namespace {
// Neumaier-compensated add; the corrected value is sum + comp.
inline void comp_add(double& sum, double& comp, double term) {
  const double t = sum + term;
  if (std::abs(sum) >= std::abs(term))
    comp += (sum - t) + term;
  else
    comp += (term - t) + sum;
  sum = t;
}
}  // namespace

void conv_accum_scalar(double* dst, double* comp, const double* a, std::size_t na, const double* b,
                       std::size_t nb) {
  for (std::size_t i = 0; i < na; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    double* d = dst + i;
    double* c = comp + i;
    for (std::size_t j = 0; j < nb; ++j) comp_add(d[j], c[j], ai * b[j]);
  }
}

double mirrored_sq_sum_scalar(const double* v, std::size_t lo, std::size_t hi, std::size_t m,
                              double c) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) {
    const double d = v[j] + v[m - j] - c;
    comp_add(sum, comp, d * d);
  }
  return sum + comp;
}

double ksum_scalar(const double* x, std::size_t n) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) comp_add(sum, comp, x[i]);
  return sum + comp;
}

void central_pow_sums_scalar(const double* x, std::size_t n, double c, double out[5]) {
  double s[5] = {0, 0, 0, 0, 0};
  double k[5] = {0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - c;
    const double d2 = d * d;
    const double d3 = d2 * d;
    comp_add(s[0], k[0], d2);
    comp_add(s[1], k[1], d3);
    comp_add(s[2], k[2], d2 * d2);
    comp_add(s[3], k[3], d2 * d3);
    comp_add(s[4], k[4], d3 * d3);
  }
  for (int i = 0; i < 5; ++i) out[i] = s[i] + k[i];
}

}  // namespace clades::kern::detail
