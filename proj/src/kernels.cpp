#include "clades/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace clades::kern {

bool avx2_supported() {
#if defined(CLADES_HAVE_AVX2_TU) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend pick_backend() {
  if (const char* env = std::getenv("CLADES_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_backend();

}  // namespace

Backend active() { return g_backend; }
void force(Backend b) { g_backend = (b == Backend::avx2 && !avx2_supported()) ? Backend::scalar : b; }
const char* name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void conv_accum(double* dst, double* comp, const double* a, std::size_t na, const double* b,
                std::size_t nb) {
#if defined(CLADES_HAVE_AVX2_TU)
  if (g_backend == Backend::avx2) {
    detail::conv_accum_avx2(dst, comp, a, na, b, nb);
    return;
  }
#endif
  detail::conv_accum_scalar(dst, comp, a, na, b, nb);
}

double mirrored_sq_sum(const double* v, std::size_t lo, std::size_t hi, std::size_t m, double c) {
#if defined(CLADES_HAVE_AVX2_TU)
  if (g_backend == Backend::avx2) return detail::mirrored_sq_sum_avx2(v, lo, hi, m, c);
#endif
  return detail::mirrored_sq_sum_scalar(v, lo, hi, m, c);
}

double ksum(const double* x, std::size_t n) {
#if defined(CLADES_HAVE_AVX2_TU)
  if (g_backend == Backend::avx2) return detail::ksum_avx2(x, n);
#endif
  return detail::ksum_scalar(x, n);
}

void central_pow_sums(const double* x, std::size_t n, double c, double out[5]) {
#if defined(CLADES_HAVE_AVX2_TU)
  if (g_backend == Backend::avx2) {
    detail::central_pow_sums_avx2(x, n, c, out);
    return;
  }
#endif
  detail::central_pow_sums_scalar(x, n, c, out);
}

}  // namespace clades::kern
