// AVX2 variants. This translation unit is compiled with -mavx2 and must only
// be entered after the runtime CPU check in kernels.cpp.
#include "oxmc/kernels.hpp"

#ifdef OXMC_KERNELS_HAVE_AVX2

#include <immintrin.h>

namespace oxmc::kernels::avx2 {

void fill(double* dst, size_t n, double value) {
  const __m256d v = _mm256_set1_pd(value);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(dst + i, v);
  for (; i < n; ++i) dst[i] = value;
}

double max(const double* x, size_t n) {
  if (n < 4) return scalar::max(x, n);
  __m256d vmax = _mm256_loadu_pd(x);
  size_t i = 4;
  for (; i + 4 <= n; i += 4) vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double best = lanes[0];
  for (int l = 1; l < 4; ++l) {
    if (lanes[l] > best) best = lanes[l];
  }
  for (; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }
  return best;
}

double sum(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += x[i];
  return total;
}

size_t argmax(const double* x, size_t n) {
  if (n < 8) return scalar::argmax(x, n);
  __m256d vmax = _mm256_loadu_pd(x);
  __m256i vidx = _mm256_set_epi64x(3, 2, 1, 0);
  __m256i vcur = vidx;
  const __m256i vstep = _mm256_set1_epi64x(4);
  size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    vcur = _mm256_add_epi64(vcur, vstep);
    const __m256d v = _mm256_loadu_pd(x + i);
    // Strictly-greater keeps the first occurrence of a lane's maximum.
    const __m256d gt = _mm256_cmp_pd(v, vmax, _CMP_GT_OQ);
    vmax = _mm256_blendv_pd(vmax, v, gt);
    vidx = _mm256_blendv_epi8(vidx, vcur, _mm256_castpd_si256(gt));
  }
  alignas(32) double vals[4];
  alignas(32) int64_t idxs[4];
  _mm256_store_pd(vals, vmax);
  _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), vidx);
  double best = vals[0];
  size_t best_i = static_cast<size_t>(idxs[0]);
  for (int l = 1; l < 4; ++l) {
    const auto li = static_cast<size_t>(idxs[l]);
    if (vals[l] > best || (vals[l] == best && li < best_i)) {
      best = vals[l];
      best_i = li;
    }
  }
  // Tail indices are larger than any lane index, so strict > preserves the
  // lowest-index tie-break.
  for (; i < n; ++i) {
    if (x[i] > best) {
      best = x[i];
      best_i = i;
    }
  }
  return best_i;
}

size_t count_eq(const int32_t* x, size_t n, int32_t value) {
  const __m256i v = _mm256_set1_epi32(value);
  size_t count = 0;
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i eq =
        _mm256_cmpeq_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i)), v);
    count += static_cast<size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq)))));
  }
  for (; i < n; ++i) {
    if (x[i] == value) ++count;
  }
  return count;
}

}  // namespace oxmc::kernels::avx2

#endif  // OXMC_KERNELS_HAVE_AVX2
