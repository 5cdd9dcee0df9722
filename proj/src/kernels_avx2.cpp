// AVX2 variants; this translation unit is compiled with -mavx2.
#include "clades/kernels.hpp"

#if defined(CLADES_HAVE_AVX2_TU)

#include <immintrin.h>

#include <cmath>

namespace clades::kern::detail {

namespace {

inline void comp_add(double& sum, double& comp, double term) {
  const double t = sum + term;
  if (std::abs(sum) >= std::abs(term))
    comp += (sum - t) + term;
  else
    comp += (term - t) + sum;
  sum = t;
}

inline __m256d abs4(__m256d x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  return _mm256_and_pd(x, mask);
}

// 4-lane Neumaier step; corrected lane values are sum + comp.
inline void comp_add4(__m256d& sum, __m256d& comp, __m256d term) {
  const __m256d t = _mm256_add_pd(sum, term);
  const __m256d big_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), term);
  const __m256d big_term = _mm256_add_pd(_mm256_sub_pd(term, t), sum);
  const __m256d ge = _mm256_cmp_pd(abs4(sum), abs4(term), _CMP_GE_OQ);
  comp = _mm256_add_pd(comp, _mm256_blendv_pd(big_term, big_sum, ge));
  sum = t;
}

inline double reduce_comp(__m256d sum, __m256d comp) {
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, sum);
  _mm256_store_pd(c, comp);
  double total = 0.0, tc = 0.0;
  for (int i = 0; i < 4; ++i) comp_add(total, tc, s[i] + c[i]);
  return total + tc;
}

}  // namespace

void conv_accum_avx2(double* dst, double* comp, const double* a, std::size_t na, const double* b,
                     std::size_t nb) {
  for (std::size_t i = 0; i < na; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const __m256d va = _mm256_set1_pd(ai);
    double* d = dst + i;
    double* c = comp + i;
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) {
      __m256d vd = _mm256_loadu_pd(d + j);
      __m256d vc = _mm256_loadu_pd(c + j);
      comp_add4(vd, vc, _mm256_mul_pd(va, _mm256_loadu_pd(b + j)));
      _mm256_storeu_pd(d + j, vd);
      _mm256_storeu_pd(c + j, vc);
    }
    for (; j < nb; ++j) comp_add(d[j], c[j], ai * b[j]);
  }
}

double mirrored_sq_sum_avx2(const double* v, std::size_t lo, std::size_t hi, std::size_t m,
                            double c) {
  if (hi < lo) return 0.0;
  const __m256d vc = _mm256_set1_pd(c);
  __m256d sum = _mm256_setzero_pd();
  __m256d cmp = _mm256_setzero_pd();
  std::size_t j = lo;
  for (; j + 4 <= hi + 1; j += 4) {
    const __m256d fwd = _mm256_loadu_pd(v + j);
    // partner of lane l is v[m - (j + l)]: load v[m-j-3 .. m-j] and reverse
    __m256d bwd = _mm256_loadu_pd(v + (m - j - 3));
    bwd = _mm256_permute4x64_pd(bwd, 0x1B);  // lanes 3,2,1,0
    const __m256d d = _mm256_sub_pd(_mm256_add_pd(fwd, bwd), vc);
    comp_add4(sum, cmp, _mm256_mul_pd(d, d));
  }
  double total = reduce_comp(sum, cmp);
  double tc = 0.0;
  for (; j <= hi; ++j) {
    const double d = v[j] + v[m - j] - c;
    comp_add(total, tc, d * d);
  }
  return total + tc;
}

double ksum_avx2(const double* x, std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d cmp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) comp_add4(sum, cmp, _mm256_loadu_pd(x + i));
  double total = reduce_comp(sum, cmp);
  double tc = 0.0;
  for (; i < n; ++i) comp_add(total, tc, x[i]);
  return total + tc;
}

void central_pow_sums_avx2(const double* x, std::size_t n, double c, double out[5]) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d s2 = _mm256_setzero_pd(), k2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd(), k3 = _mm256_setzero_pd();
  __m256d s4 = _mm256_setzero_pd(), k4 = _mm256_setzero_pd();
  __m256d s5 = _mm256_setzero_pd(), k5 = _mm256_setzero_pd();
  __m256d s6 = _mm256_setzero_pd(), k6 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    const __m256d d2 = _mm256_mul_pd(d, d);
    const __m256d d3 = _mm256_mul_pd(d2, d);
    comp_add4(s2, k2, d2);
    comp_add4(s3, k3, d3);
    comp_add4(s4, k4, _mm256_mul_pd(d2, d2));
    comp_add4(s5, k5, _mm256_mul_pd(d2, d3));
    comp_add4(s6, k6, _mm256_mul_pd(d3, d3));
  }
  out[0] = reduce_comp(s2, k2);
  out[1] = reduce_comp(s3, k3);
  out[2] = reduce_comp(s4, k4);
  out[3] = reduce_comp(s5, k5);
  out[4] = reduce_comp(s6, k6);
  double tc[5] = {0, 0, 0, 0, 0};
  for (; i < n; ++i) {
    const double d = x[i] - c;
    const double d2 = d * d;
    const double d3 = d2 * d;
    comp_add(out[0], tc[0], d2);
    comp_add(out[1], tc[1], d3);
    comp_add(out[2], tc[2], d2 * d2);
    comp_add(out[3], tc[3], d2 * d3);
    comp_add(out[4], tc[4], d3 * d3);
  }
  for (int k = 0; k < 5; ++k) out[k] += tc[k];
}

}  // namespace clades::kern::detail

#endif  // CLADES_HAVE_AVX2_TU
