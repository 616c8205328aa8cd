#pragma once

#include <complex>
#include <cstddef>

namespace oscint {

using cplx = std::complex<double>;

// Inner loops shared by the evaluators. All pointers may alias only where
// noted; lengths are element counts.
struct Kernels {
    const char* name;
    // y[i] += a * x[i]
    void (*caxpy)(cplx* y, cplx a, const cplx* x, std::size_t n);
    // y[i] += a * e[i] * x[i]
    void (*caxpy_mul)(cplx* y, cplx a, const cplx* e, const cplx* x, std::size_t n);
    // e[i] *= w[i]   (phase advance)
    void (*cmul_inplace)(cplx* e, const cplx* w, std::size_t n);
    // sum a[i] * b[i]
    cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);
    // out[i] = |x[i]|^2
    void (*cabs2)(double* out, const cplx* x, std::size_t n);
    // m[i] = max(m[i], |x[i]|^2)
    void (*cabs2_max)(double* m, const cplx* x, std::size_t n);
};

const Kernels& scalar_kernels();
// nullptr when the CPU (or the build) lacks AVX2+FMA.
const Kernels* avx2_kernels();
// Selected once: AVX2 when available unless OSCINT_SIMD=scalar.
const Kernels& kernels();

// sum |x[i]|^p for p > 0 (p == 2 fast path).
double abs_pow_sum(const cplx* x, std::size_t n, double p);
double abs_max(const cplx* x, std::size_t n);

}  // namespace oscint
