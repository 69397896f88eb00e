#include "cluspath/kernels.hpp"

#include <immintrin.h>

namespace cluspath::kernels::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; k + 4 <= n; k += 4) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    }
    double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) {
        const double diff = a[k] - b[k];
        acc += diff * diff;
    }
    return acc;
}

void axpy(double w, const double* x, double* y, std::size_t n) {
    const __m256d wv = _mm256_set1_pd(w);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d yv = _mm256_fmadd_pd(wv, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
        _mm256_storeu_pd(y + k, yv);
    }
    for (; k < n; ++k) {
        y[k] += w * x[k];
    }
}

void squared_distances(const double* point, const double* rows, std::size_t n_rows,
                       std::size_t dim, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        out[r] = squared_distance(point, rows + r * dim, dim);
    }
}

}  // namespace cluspath::kernels::avx2
