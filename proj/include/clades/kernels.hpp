#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the exact-table and moment machinery.
// Each kernel has a scalar reference implementation and an AVX2 variant;
// the active backend is picked once at runtime (CPU probe, overridable via
// the CLADES_KERNELS environment variable or force()). Backends may differ
// only in summation order, so results agree to a few ulps.

namespace clades::kern {

enum class Backend { scalar, avx2 };

Backend active();
void force(Backend b);  // test/bench hook; not thread-safe against running kernels
const char* name(Backend b);
bool avx2_supported();

// dst[i+j] += a[i] * b[j] with Neumaier compensation per slot; the corrected
// value of a slot is dst[s] + comp[s]. Both arrays need na + nb - 1 entries.
void conv_accum(double* dst, double* comp, const double* a, std::size_t na, const double* b,
                std::size_t nb);

// sum over j = lo..hi of (v[j] + v[m - j] - c)^2; requires m - lo <= last valid index.
double mirrored_sq_sum(const double* v, std::size_t lo, std::size_t hi, std::size_t m, double c);

// Compensated sum of x[0..n).
double ksum(const double* x, std::size_t n);

// Compensated power sums of d = x[i] - c: out[k] = sum d^(k+2) for k = 0..4.
void central_pow_sums(const double* x, std::size_t n, double c, double out[5]);

namespace detail {
void conv_accum_scalar(double*, double*, const double*, std::size_t, const double*, std::size_t);
double mirrored_sq_sum_scalar(const double*, std::size_t, std::size_t, std::size_t, double);
double ksum_scalar(const double*, std::size_t);
void central_pow_sums_scalar(const double*, std::size_t, double, double[5]);
#if defined(CLADES_HAVE_AVX2_TU)
void conv_accum_avx2(double*, double*, const double*, std::size_t, const double*, std::size_t);
double mirrored_sq_sum_avx2(const double*, std::size_t, std::size_t, std::size_t, double);
double ksum_avx2(const double*, std::size_t);
void central_pow_sums_avx2(const double*, std::size_t, double, double[5]);
#endif
}  // namespace detail

}  // namespace clades::kern
