#include "rislink/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace rislink::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

} // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_abs2(const cplx* z, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(z);
    const std::size_t d = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < d; ++i) s += p[i] * p[i];
    return s;
}

double sum_abs(const cplx* z, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(z);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    // 4 complex values per step; unpack separates re/im (order permuted,
    // which only changes the reduction order).
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(p + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);
        const __m256d re = _mm256_unpacklo_pd(v0, v1);
        const __m256d im = _mm256_unpackhi_pd(v0, v1);
        const __m256d mag2 = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(mag2));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        s += std::sqrt(re * re + im * im);
    }
    return s;
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    // Sign mask flips the imaginary slots so one fmadd yields ar*bi - ai*br.
    const __m256d sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i); // [ar0 ai0 ar1 ai1]
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);                 // ar*br + ai*bi per pair
        const __m256d vbs = _mm256_permute_pd(vb, 0b0101);        // [bi0 br0 bi1 br1]
        const __m256d vas = _mm256_xor_pd(va, sign);              // [ar0 -ai0 ar1 -ai1]
        acc_im = _mm256_fmadd_pd(vas, vbs, acc_im);               // ar*bi - ai*br per pair
    }
    double re = hsum(acc_re);
    double im = hsum(acc_im);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d vxs = _mm256_permute_pd(vx, 0b0101);
        // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
        const __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, vxs));
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
    }
    const double alr = alpha.real(), ali = alpha.imag();
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(alr * xr - ali * xi, alr * xi + ali * xr);
    }
}

} // namespace rislink::kernels::avx2

#endif // x86_64
