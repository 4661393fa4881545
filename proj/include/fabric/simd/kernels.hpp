/**
 * @file kernels.hpp
 * @brief Data-parallel inner loops with a scalar reference and SIMD variants.
 *
 * Every variant performs the same IEEE operations in the same order, so all
 * backends produce bit-identical results. The active backend is chosen once at
 * startup from the CPU's capabilities and may be overridden (tests, or the
 * INSPECT_SIMD environment variable: "scalar" or "avx2").
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fabric::simd {

enum class Backend { Scalar, Avx2 };

/// LU factors of a banded system plus the numerator stencil, laid out for the
/// line-filter kernels. Pointers are owned by the caller (see edge::ZeroPhaseHighPass).
struct BandedPlan {
    int n = 0;                    ///< system size (samples per line)
    int half = 0;                 ///< half bandwidth d
    const double* taps = nullptr; ///< 2d+1 numerator taps, applied to x[i-d .. i+d]
    const double* lower = nullptr;    ///< n*d unit-lower multipliers, row i holds L(i, i-d .. i-1)
    const double* upper = nullptr;    ///< n*(d+1) upper entries, row i holds U(i, i .. i+d)
    const double* inv_diag = nullptr; ///< n reciprocals of U(i,i)
};

struct Kernels {
    Backend backend;

    /// out[i] = |a[i] - b[i]|
    void (*abs_diff)(const double* a, const double* b, double* out, std::size_t n);

    /// labels[i] = 0 if v < lo, 1 if lo <= v < hi, 2 if v >= hi
    void (*classify)(const double* v, std::size_t n, double lo, double hi, std::uint8_t* labels);

    /// out[i] = sqrt(a[i]^2 + b[i]^2)
    void (*magnitude)(const double* a, const double* b, double* out, std::size_t n);

    /// Filters `width` independent lines stored as columns of a row-major n x width
    /// block (row stride `stride`). Samples beyond either end replicate the end sample.
    void (*filter_columns)(const BandedPlan& plan, const double* in, double* out,
                           std::size_t width, std::size_t stride);
};

const Kernels& scalar_kernels() noexcept;
#if defined(FABRIC_HAVE_AVX2)
const Kernels& avx2_kernels() noexcept;
#endif

bool backend_available(Backend b) noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument if the backend is not supported on this CPU/build.
void set_backend(Backend b);
const Kernels& kernels() noexcept;
const Kernels& kernels(Backend b);

std::string_view backend_name(Backend b) noexcept;

} // namespace fabric::simd
