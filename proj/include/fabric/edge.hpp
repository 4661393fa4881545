/**
 * @file edge.hpp
 * @brief Zero-phase high-pass Butterworth filtering with banded matrices, and
 *        separable edge extraction built on it.
 *
 * The filter realizes
 *
 *     H(w) = (2 - 2cos w)^d / [ (2 - 2cos w)^d + alpha (2 + 2cos w)^d ],
 *     alpha = ((1 - cos wc) / (1 + cos wc))^d,
 *
 * so H(0) = 0, H(pi) = 1 and H(wc) = 1/2. In matrix form y = A^-1 B x, with
 * B the N x (N+2d) Toeplitz matrix of (-z + 2 - 1/z)^d and A the N x N
 * Toeplitz matrix of (-z + 2 - 1/z)^d + alpha (z + 2 + 1/z)^d. The input is
 * extended by d samples at each end (end samples repeated) so that every row
 * of B is a complete stencil.
 */
#pragma once

#include "fabric/banded.hpp"
#include "fabric/image.hpp"
#include "fabric/simd/kernels.hpp"

#include <memory>
#include <span>
#include <vector>

namespace fabric::edge {

class ZeroPhaseHighPass {
public:
    static constexpr int kDefaultOrder = 3;
    static constexpr double kDefaultCutoff = 0.9;
    static constexpr int kDefaultLength = 1024;

    /// Throws std::invalid_argument unless order >= 1, 0 < cutoff < pi, length > 2*order.
    static ZeroPhaseHighPass design(int order = kDefaultOrder, double cutoff = kDefaultCutoff,
                                    int length = kDefaultLength);

    int order() const noexcept { return order_; }
    double cutoff() const noexcept { return cutoff_; }
    double alpha() const noexcept { return alpha_; }
    int length() const noexcept { return length_; }

    /// Numerator and denominator stencils, 2d+1 taps from offset -d to +d.
    std::span<const double> numerator() const noexcept { return num_; }
    std::span<const double> denominator() const noexcept { return den_; }

    const BandedMatrix& a() const noexcept { return *a_; }
    const BandedMatrix& b() const noexcept { return *b_; }
    const BandedLU& factors() const noexcept { return *lu_; }

    /// Frequency response of the realized filter (real: the filter is zero-phase).
    double response(double omega) const noexcept;

    /// Filters one signal. Inputs shorter than length() are padded with their
    /// last sample; the result always has length() samples. Longer inputs throw
    /// std::invalid_argument.
    std::vector<double> apply(std::span<const double> x) const;

    /// Filters the columns of a row-major length() x width block.
    void apply_columns(const double* in, double* out, std::size_t width, std::size_t stride) const;

    /// Kernel view of the factors; only valid when factors() did not pivot.
    const simd::BandedPlan& plan() const noexcept { return plan_; }

private:
    ZeroPhaseHighPass() = default;

    int order_ = 0;
    double cutoff_ = 0.0;
    double alpha_ = 0.0;
    int length_ = 0;
    std::vector<double> num_, den_;
    std::shared_ptr<const BandedMatrix> a_, b_;
    std::shared_ptr<const BandedLU> lu_;
    std::shared_ptr<const std::vector<double>> taps_, lower_, upper_, inv_diag_; // plan storage, shared by copies
    simd::BandedPlan plan_;
};

/// Non-negative edge magnitudes, same shape as the source image.
struct EdgeImage {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double operator()(int r, int c) const noexcept { return values[static_cast<std::size_t>(r) * cols + c]; }
};

struct DirectionalEdges {
    std::vector<double> vertical;   ///< filter applied along each row
    std::vector<double> horizontal; ///< filter applied along each column
};

/// Row and column responses (edge-padded to the filter length).
DirectionalEdges directional_edges(const GrayImage& img, const ZeroPhaseHighPass& f);

/// sqrt(V^2 + H^2) per pixel. Throws std::invalid_argument if either image
/// dimension exceeds the filter length.
EdgeImage extract_edges(const GrayImage& img, const ZeroPhaseHighPass& f);

/// Max-normalized copy for export.
GrayImage normalized_for_export(const EdgeImage& e);

} // namespace fabric::edge
