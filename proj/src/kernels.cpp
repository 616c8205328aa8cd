#include "oscint/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

namespace oscint {

#if defined(OSCINT_HAVE_AVX2)
namespace avx2 {
const Kernels& table();
}
#endif

const Kernels* avx2_kernels() {
#if defined(OSCINT_HAVE_AVX2)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &avx2::table() : nullptr;
#else
    return nullptr;
#endif
}

const Kernels& kernels() {
    static const Kernels* sel = [] {
        const char* env = std::getenv("OSCINT_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        const Kernels* v = avx2_kernels();
        return v ? v : &scalar_kernels();
    }();
    return *sel;
}

double abs_pow_sum(const cplx* x, std::size_t n, double p) {
    constexpr std::size_t B = 256;
    double buf[B];
    double s = 0.0;
    const Kernels& k = kernels();
    for (std::size_t i = 0; i < n; i += B) {
        std::size_t m = std::min(B, n - i);
        k.cabs2(buf, x + i, m);
        if (p == 2.0) {
            for (std::size_t j = 0; j < m; ++j) s += buf[j];
        } else {
            const double h = 0.5 * p;
            for (std::size_t j = 0; j < m; ++j)
                if (buf[j] > 0.0) s += std::pow(buf[j], h);
        }
    }
    return s;
}

double abs_max(const cplx* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(x[i]));
    return std::sqrt(m);
}

}  // namespace oscint
