// Scalar banded line filter shared by every backend for its remainder columns.
// Internal linkage on purpose: each kernel TU is compiled with its own ISA flags.
#pragma once

#include "fabric/simd/kernels.hpp"

#include <algorithm>

namespace fabric::simd::detail {

namespace {

inline void filter_columns_scalar(const BandedPlan& plan, const double* in, double* out,
                                  std::size_t first, std::size_t last, std::size_t stride) {
    const int n = plan.n;
    const int d = plan.half;
    for (std::size_t c = first; c < last; ++c) {
        // Forward pass: z = L^-1 (B x), written into out.
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= 2 * d; ++k) {
                const int src = std::clamp(i + k - d, 0, n - 1);
                acc += plan.taps[k] * in[static_cast<std::size_t>(src) * stride + c];
            }
            const double* l = plan.lower + static_cast<std::size_t>(i) * d;
            for (int k = 0; k < d; ++k) {
                const int j = i - d + k;
                if (j < 0) continue;
                acc -= l[k] * out[static_cast<std::size_t>(j) * stride + c];
            }
            out[static_cast<std::size_t>(i) * stride + c] = acc;
        }
        // Backward pass: y = U^-1 z, in place.
        for (int i = n - 1; i >= 0; --i) {
            double acc = out[static_cast<std::size_t>(i) * stride + c];
            const double* u = plan.upper + static_cast<std::size_t>(i) * (d + 1);
            for (int k = 1; k <= d; ++k) {
                const int j = i + k;
                if (j >= n) break;
                acc -= u[k] * out[static_cast<std::size_t>(j) * stride + c];
            }
            out[static_cast<std::size_t>(i) * stride + c] = acc * plan.inv_diag[i];
        }
    }
}

} // namespace

} // namespace fabric::simd::detail
