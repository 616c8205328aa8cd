// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "oscint/kernels.hpp"

#include <immintrin.h>

namespace oscint {
namespace avx2 {
namespace {

// Two complex doubles per register, interleaved (re, im, re, im).
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);        // (ar, ar)
    __m256d aim = _mm256_permute_pd(a, 0xF);   // (ai, ai)
    __m256d bsw = _mm256_permute_pd(b, 0x5);   // (bi, br)
    return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

inline const double* d(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* d(cplx* p) { return reinterpret_cast<double*>(p); }

void caxpy(cplx* y, cplx a, const cplx* x, std::size_t n) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(d(x + i));
        __m256d yv = _mm256_loadu_pd(d(y + i));
        _mm256_storeu_pd(d(y + i), _mm256_add_pd(yv, cmul(av, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void caxpy_mul(cplx* y, cplx a, const cplx* e, const cplx* x, std::size_t n) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d ex = cmul(_mm256_loadu_pd(d(e + i)), _mm256_loadu_pd(d(x + i)));
        __m256d yv = _mm256_loadu_pd(d(y + i));
        _mm256_storeu_pd(d(y + i), _mm256_add_pd(yv, cmul(av, ex)));
    }
    for (; i < n; ++i) y[i] += a * (e[i] * x[i]);
}

void cmul_inplace(cplx* e, const cplx* w, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d ev = _mm256_loadu_pd(d(e + i));
        _mm256_storeu_pd(d(e + i), cmul(ev, _mm256_loadu_pd(d(w + i))));
    }
    for (; i < n; ++i) e[i] *= w[i];
}

cplx cdot(const cplx* a, const cplx* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(d(a + i)), _mm256_loadu_pd(d(b + i))));
    alignas(32) double t[4];
    _mm256_store_pd(t, acc);
    cplx s(t[0] + t[2], t[1] + t[3]);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

// |x|^2 for two complex values, returned in lanes (v0, v0, v1, v1).
inline __m256d abs2_dup(__m256d v) {
    __m256d sq = _mm256_mul_pd(v, v);
    return _mm256_hadd_pd(sq, sq);
}

void cabs2(double* out, const cplx* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d h = abs2_dup(_mm256_loadu_pd(d(x + i)));
        // lanes: (a, a, b, b) -> take 0 and 2
        __m128d lo = _mm256_castpd256_pd128(h);
        __m128d hi = _mm256_extractf128_pd(h, 1);
        _mm_storeu_pd(out + i, _mm_unpacklo_pd(lo, hi));
    }
    for (; i < n; ++i) out[i] = std::norm(x[i]);
}

void cabs2_max(double* m, const cplx* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d h = abs2_dup(_mm256_loadu_pd(d(x + i)));
        __m128d v = _mm_unpacklo_pd(_mm256_castpd256_pd128(h), _mm256_extractf128_pd(h, 1));
        _mm_storeu_pd(m + i, _mm_max_pd(_mm_loadu_pd(m + i), v));
    }
    for (; i < n; ++i) {
        double v = std::norm(x[i]);
        if (v > m[i]) m[i] = v;
    }
}

}  // namespace

const Kernels& table() {
    static const Kernels k{"avx2", caxpy, caxpy_mul, cmul_inplace, cdot, cabs2, cabs2_max};
    return k;
}

}  // namespace avx2
}  // namespace oscint
