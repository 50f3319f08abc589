// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "mids/kernels/kernels.hpp"

namespace mids::kernels {
namespace {

void multiply_gather_avx2(double* target, const double* factor, const std::uint32_t* index,
                          std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(index + i));
    const __m256d f = _mm256_i32gather_pd(factor, idx, 8);
    const __m256d t = _mm256_loadu_pd(target + i);
    _mm256_storeu_pd(target + i, _mm256_mul_pd(t, f));
  }
  for (; i < n; ++i) target[i] *= factor[index[i]];
}

void divide_guarded_avx2(double* out, const double* num, const double* den, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(num + i);
    const __m256d b = _mm256_loadu_pd(den + i);
    const __m256d q = _mm256_div_pd(a, b);
    const __m256d is_zero = _mm256_cmp_pd(b, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(q, zero, is_zero));
  }
  for (; i < n; ++i) out[i] = den[i] == 0.0 ? 0.0 : num[i] / den[i];
}

void scale_avx2(double* x, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  for (; i < n; ++i) x[i] *= s;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += x[i];
  return total;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double result = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) result = std::fmax(result, std::fabs(a[i] - b[i]));
  return result;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2, multiply_gather_avx2, divide_guarded_avx2,
                                 scale_avx2, sum_avx2,             max_abs_diff_avx2};
  return table;
}

}  // namespace mids::kernels
