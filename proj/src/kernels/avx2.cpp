// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include "hdgshape/kernels.hpp"

#include <immintrin.h>

namespace hdgshape::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double weighted_dot_avx2(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t q = 0;
  for (; q + 8 <= n; q += 8) {
    const __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(a + q));
    const __m256d wa1 = _mm256_mul_pd(_mm256_loadu_pd(w + q + 4), _mm256_loadu_pd(a + q + 4));
    acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(b + q), acc0);
    acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(b + q + 4), acc1);
  }
  for (; q + 4 <= n; q += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(a + q));
    acc0 = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + q), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; q < n; ++q) sum += w[q] * a[q] * b[q];
  return sum;
}

void weighted_gram_avx2(const double* a, std::size_t na, const double* b, std::size_t nb,
                        const double* w, std::size_t nq, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double* ai = a + i * nq;
    for (std::size_t j = 0; j < nb; ++j) {
      out[i * nb + j] += weighted_dot_avx2(ai, b + j * nq, w, nq);
    }
  }
}

void combine_rows_avx2(const double* c, const double* table, std::size_t rows, std::size_t nq,
                       double* out) {
  std::size_t q = 0;
  for (; q + 4 <= nq; q += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < rows; ++i) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(c[i]), _mm256_loadu_pd(table + i * nq + q), acc);
    }
    _mm256_storeu_pd(out + q, acc);
  }
  for (; q < nq; ++q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) sum += c[i] * table[i * nq + q];
    out[q] = sum;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{weighted_gram_avx2, combine_rows_avx2, weighted_dot_avx2};
  return t;
}

}  // namespace hdgshape::kernels
