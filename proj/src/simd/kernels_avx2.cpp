// AVX2 variants. Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include "fabric/simd/kernels.hpp"
#include "line_filter.hpp"

#include <immintrin.h>

#include <cmath>

namespace fabric::simd {

namespace {

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_andnot_pd(sign, d));
    }
    for (; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

void classify(const double* v, std::size_t n, double lo, double hi, std::uint8_t* labels) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        const int weak = _mm256_movemask_pd(_mm256_cmp_pd(x, vlo, _CMP_GE_OQ));
        const int strong = _mm256_movemask_pd(_mm256_cmp_pd(x, vhi, _CMP_GE_OQ));
        for (int k = 0; k < 4; ++k) {
            labels[i + k] = static_cast<std::uint8_t>(((weak >> k) & 1) + ((strong >> k) & 1));
        }
    }
    for (; i < n; ++i) labels[i] = v[i] >= hi ? 2 : (v[i] >= lo ? 1 : 0);
}

void magnitude(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(a + i);
        const __m256d y = _mm256_loadu_pd(b + i);
        const __m256d s = _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void filter_columns(const BandedPlan& plan, const double* in, double* out, std::size_t width,
                    std::size_t stride) {
    const int n = plan.n;
    const int d = plan.half;
    std::size_t c = 0;
    for (; c + 4 <= width; c += 4) {
        for (int i = 0; i < n; ++i) {
            __m256d acc = _mm256_setzero_pd();
            for (int k = 0; k <= 2 * d; ++k) {
                const int src = std::clamp(i + k - d, 0, n - 1);
                const __m256d x = _mm256_loadu_pd(in + static_cast<std::size_t>(src) * stride + c);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(plan.taps[k]), x));
            }
            const double* l = plan.lower + static_cast<std::size_t>(i) * d;
            for (int k = 0; k < d; ++k) {
                const int j = i - d + k;
                if (j < 0) continue;
                const __m256d z = _mm256_loadu_pd(out + static_cast<std::size_t>(j) * stride + c);
                acc = _mm256_sub_pd(acc, _mm256_mul_pd(_mm256_set1_pd(l[k]), z));
            }
            _mm256_storeu_pd(out + static_cast<std::size_t>(i) * stride + c, acc);
        }
        for (int i = n - 1; i >= 0; --i) {
            double* row = out + static_cast<std::size_t>(i) * stride + c;
            __m256d acc = _mm256_loadu_pd(row);
            const double* u = plan.upper + static_cast<std::size_t>(i) * (d + 1);
            for (int k = 1; k <= d; ++k) {
                const int j = i + k;
                if (j >= n) break;
                const __m256d y = _mm256_loadu_pd(out + static_cast<std::size_t>(j) * stride + c);
                acc = _mm256_sub_pd(acc, _mm256_mul_pd(_mm256_set1_pd(u[k]), y));
            }
            _mm256_storeu_pd(row, _mm256_mul_pd(acc, _mm256_set1_pd(plan.inv_diag[i])));
        }
    }
    detail::filter_columns_scalar(plan, in, out, c, width, stride);
}

} // namespace

const Kernels& avx2_kernels() noexcept {
    static const Kernels k{Backend::Avx2, abs_diff, classify, magnitude, filter_columns};
    return k;
}

} // namespace fabric::simd
