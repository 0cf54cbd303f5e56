#include <immintrin.h>

#include "kernels_internal.hpp"

namespace rcar::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> x) {
    const double* p = x.data();
    const std::size_t n = x.size();
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += p[i];
    return s;
}

LagSums lag_sums(std::span<const double> x) {
    LagSums r;
    const std::size_t len = x.size();
    if (len < 2) return r;
    const double* p = x.data();
    const std::size_t m = len - 2;  // terms i = 0..m-1
    __m256d s22 = _mm256_setzero_pd(), s01 = _mm256_setzero_pd(), s02 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(p + i);
        const __m256d x1 = _mm256_loadu_pd(p + i + 1);
        const __m256d x2 = _mm256_loadu_pd(p + i + 2);
        s22 = _mm256_fmadd_pd(x0, x0, s22);
        s01 = _mm256_fmadd_pd(x0, x1, s01);
        s02 = _mm256_fmadd_pd(x0, x2, s02);
    }
    double a22 = hsum(s22), a01 = hsum(s01), a02 = hsum(s02);
    for (; i < m; ++i) {
        a22 += p[i] * p[i];
        a01 += p[i] * p[i + 1];
        a02 += p[i] * p[i + 2];
    }
    const double a = p[len - 2], b = p[len - 1];
    r.s22 = a22;
    r.s02 = a02;
    r.s00 = a22 + a * a;
    r.s01 = a01 + a * b;
    return r;
}

ResidualSums residual_sums(std::span<const double> x, double theta) {
    ResidualSums r;
    const std::size_t len = x.size();
    if (len < 2) return r;
    const double* p = x.data();
    const std::size_t m = len - 1;  // t = 1..m
    const __m256d th = _mm256_set1_pd(theta);
    __m256d see = _mm256_setzero_pd(), sz = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const __m256d prev = _mm256_loadu_pd(p + k);
        const __m256d cur = _mm256_loadu_pd(p + k + 1);
        const __m256d e = _mm256_fnmadd_pd(th, prev, cur);
        see = _mm256_fmadd_pd(e, e, see);
        sz = _mm256_fmadd_pd(prev, prev, sz);
    }
    r.see = hsum(see);
    r.sz = hsum(sz);
    for (; k < m; ++k) {
        const double e = p[k + 1] - theta * p[k];
        r.see += e * e;
        r.sz += p[k] * p[k];
    }
    return r;
}

RegressionSums regression_sums(std::span<const double> x, double theta, double zbar) {
    RegressionSums r;
    const std::size_t len = x.size();
    if (len < 2) return r;
    const double* p = x.data();
    const std::size_t m = len - 1;
    const __m256d th = _mm256_set1_pd(theta);
    const __m256d zb = _mm256_set1_pd(zbar);
    __m256d szz = _mm256_setzero_pd(), sze = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const __m256d prev = _mm256_loadu_pd(p + k);
        const __m256d cur = _mm256_loadu_pd(p + k + 1);
        const __m256d e = _mm256_fnmadd_pd(th, prev, cur);
        const __m256d dz = _mm256_fmsub_pd(prev, prev, zb);
        szz = _mm256_fmadd_pd(dz, dz, szz);
        sze = _mm256_fmadd_pd(dz, _mm256_mul_pd(e, e), sze);
    }
    r.szz = hsum(szz);
    r.sze = hsum(sze);
    for (; k < m; ++k) {
        const double e = p[k + 1] - theta * p[k];
        const double dz = p[k] * p[k] - zbar;
        r.szz += dz * dz;
        r.sze += dz * e * e;
    }
    return r;
}

}  // namespace rcar::kernels::avx2
