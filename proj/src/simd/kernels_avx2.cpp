// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include <immintrin.h>

#include <limits>

#include "claimdist/simd/kernels.hpp"

namespace claimdist::simd::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmin(__m256d v) noexcept {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_min_sd(lo, swapped));
}

}  // namespace

double dot(const float* a, const float* b, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(a + i);
    __m256 vb = _mm256_loadu_ps(b + i);
    __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
    __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
    __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
    __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
    acc0 = _mm256_fmadd_pd(a_lo, b_lo, acc0);
    acc1 = _mm256_fmadd_pd(a_hi, b_hi, acc1);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

void similarity_to_cost(const double* sims, double* out, std::size_t n) noexcept {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // max_pd(x, 0) yields 0 for NaN and -0.0, matching std::max(0.0, x).
    __m256d s = _mm256_max_pd(_mm256_loadu_pd(sims + i), zero);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(one, s));
  }
  for (; i < n; ++i) {
    double s = sims[i] > 0.0 ? sims[i] : 0.0;
    out[i] = 1.0 - s;
  }
}

void min_into(const double* values, double* best, std::size_t n) noexcept {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(values + i);
    __m256d b = _mm256_loadu_pd(best + i);
    _mm256_storeu_pd(best + i, _mm256_min_pd(v, b));
  }
  for (; i < n; ++i) {
    if (values[i] < best[i]) best[i] = values[i];
  }
}

double min_value(const double* values, std::size_t n) noexcept {
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_set1_pd(best);
    for (; i + 4 <= n; i += 4) {
      acc = _mm256_min_pd(_mm256_loadu_pd(values + i), acc);
    }
    best = hmin(acc);
  }
  for (; i < n; ++i) {
    if (values[i] < best) best = values[i];
  }
  return best;
}

}  // namespace claimdist::simd::avx2
