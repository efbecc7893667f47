#pragma once
#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel arithmetic kernels behind the estimator, phase control and
// feedback transforms. Scalar reference implementations are the ground
// truth; an AVX2+FMA variant is selected at runtime when the CPU supports
// it and is equivalence-tested against the scalar path.

namespace rislink::kernels {

using cplx = std::complex<double>;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_abs(const cplx* z, std::size_t n);
double sum_abs2(const cplx* z, std::size_t n);
cplx cdotc(const cplx* a, const cplx* b, std::size_t n); // sum conj(a[i]) * b[i]
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n); // y += alpha * x
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_abs(const cplx* z, std::size_t n);
double sum_abs2(const cplx* z, std::size_t n);
cplx cdotc(const cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
} // namespace avx2
#endif

// Runtime-dispatched entry points.
double dot(const double* a, const double* b, std::size_t n);
double sum_abs(const cplx* z, std::size_t n);
double sum_abs2(const cplx* z, std::size_t n);
cplx cdotc(const cplx* a, const cplx* b, std::size_t n);
void caxpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);

/// Name of the lane the dispatcher currently selects ("avx2" or "scalar").
std::string_view active_isa();

/// Force the scalar lane (test hook; RISLINK_FORCE_SCALAR=1 does the same).
void force_scalar(bool on);

} // namespace rislink::kernels
