#include "oscint/kernels.hpp"

namespace oscint {
namespace {

void caxpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void caxpy_mul(cplx* y, cplx a, const cplx* e, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * (e[i] * x[i]);
}

void cmul_inplace(cplx* e, const cplx* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) e[i] *= w[i];
}

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void cabs2(double* out, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(x[i]);
}

void cabs2_max(double* m, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::norm(x[i]);
        if (v > m[i]) m[i] = v;
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{"scalar", caxpy, caxpy_mul, cmul_inplace, cdot, cabs2, cabs2_max};
    return k;
}

}  // namespace oscint
