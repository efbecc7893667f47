#include "rislink/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace rislink::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_abs(const cplx* z, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        acc += std::sqrt(re * re + im * im);
    }
    return acc;
}

double sum_abs2(const cplx* z, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

cplx cdotc(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

} // namespace scalar

namespace {

std::atomic<bool> g_force_scalar{false};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool env_force_scalar() {
    const char* v = std::getenv("RISLINK_FORCE_SCALAR");
    return v != nullptr && v[0] == '1';
}

bool use_avx2() {
    static const bool hw = cpu_has_avx2() && !env_force_scalar();
    return hw && !g_force_scalar.load(std::memory_order_relaxed);
}

} // namespace

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

std::string_view active_isa() { return use_avx2() ? "avx2" : "scalar"; }

#if defined(__x86_64__) || defined(_M_X64)
#define RISLINK_DISPATCH(fn, ...) \
    return use_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#define RISLINK_DISPATCH_VOID(fn, ...)                  \
    do {                                                \
        if (use_avx2()) avx2::fn(__VA_ARGS__);          \
        else scalar::fn(__VA_ARGS__);                   \
    } while (0)
#else
#define RISLINK_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#define RISLINK_DISPATCH_VOID(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(const double* a, const double* b, std::size_t n) { RISLINK_DISPATCH(dot, a, b, n); }
double sum_abs(const cplx* z, std::size_t n) { RISLINK_DISPATCH(sum_abs, z, n); }
double sum_abs2(const cplx* z, std::size_t n) { RISLINK_DISPATCH(sum_abs2, z, n); }
cplx cdotc(const cplx* a, const cplx* b, std::size_t n) { RISLINK_DISPATCH(cdotc, a, b, n); }
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { RISLINK_DISPATCH_VOID(caxpy, alpha, x, y, n); }

} // namespace rislink::kernels
