#include "fabric/simd/kernels.hpp"
#include "line_filter.hpp"

#include <cmath>

namespace fabric::simd {

namespace {

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

void classify(const double* v, std::size_t n, double lo, double hi, std::uint8_t* labels) {
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = v[i] >= hi ? 2 : (v[i] >= lo ? 1 : 0);
    }
}

void magnitude(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void filter_columns(const BandedPlan& plan, const double* in, double* out, std::size_t width,
                    std::size_t stride) {
    detail::filter_columns_scalar(plan, in, out, 0, width, stride);
}

} // namespace

const Kernels& scalar_kernels() noexcept {
    static const Kernels k{Backend::Scalar, abs_diff, classify, magnitude, filter_columns};
    return k;
}

} // namespace fabric::simd
