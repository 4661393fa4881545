#include "fabric/edge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fabric::edge {

namespace {

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> power(const std::vector<double>& base, int d) {
    std::vector<double> out{1.0};
    for (int k = 0; k < d; ++k) out = convolve(out, base);
    return out;
}

} // namespace

ZeroPhaseHighPass ZeroPhaseHighPass::design(int order, double cutoff, int length) {
    if (order < 1) throw std::invalid_argument("design_filter: order must be >= 1");
    if (!(cutoff > 0.0 && cutoff < std::numbers::pi)) {
        throw std::invalid_argument("design_filter: cutoff must lie in (0, pi)");
    }
    if (length <= 2 * order) throw std::invalid_argument("design_filter: length must exceed 2*order");

    ZeroPhaseHighPass f;
    f.order_ = order;
    f.cutoff_ = cutoff;
    f.length_ = length;
    const double c = std::cos(cutoff);
    f.alpha_ = std::pow((1.0 - c) / (1.0 + c), order);

    f.num_ = power({-1.0, 2.0, -1.0}, order);
    const std::vector<double> smooth = power({1.0, 2.0, 1.0}, order);
    f.den_.resize(f.num_.size());
    for (std::size_t k = 0; k < f.num_.size(); ++k) f.den_[k] = f.num_[k] + f.alpha_ * smooth[k];

    f.b_ = std::make_shared<BandedMatrix>(BandedMatrix::toeplitz(length, length + 2 * order, f.num_, 0));
    f.a_ = std::make_shared<BandedMatrix>(BandedMatrix::toeplitz(length, length, f.den_, order));
    f.lu_ = std::make_shared<BandedLU>(*f.a_);

    if (!f.lu_->pivoted()) {
        const int d = order;
        auto lower = std::make_shared<std::vector<double>>(static_cast<std::size_t>(length) * d, 0.0);
        auto upper = std::make_shared<std::vector<double>>(static_cast<std::size_t>(length) * (d + 1), 0.0);
        auto inv = std::make_shared<std::vector<double>>(static_cast<std::size_t>(length), 0.0);
        for (int i = 0; i < length; ++i) {
            for (int k = 0; k < d; ++k) (*lower)[static_cast<std::size_t>(i) * d + k] = f.lu_->l(i, i - d + k);
            for (int k = 0; k <= d; ++k) (*upper)[static_cast<std::size_t>(i) * (d + 1) + k] = f.lu_->u(i, i + k);
            (*inv)[static_cast<std::size_t>(i)] = 1.0 / f.lu_->u(i, i);
        }
        auto taps = std::make_shared<std::vector<double>>(f.num_);
        f.taps_ = taps;
        f.lower_ = lower;
        f.upper_ = upper;
        f.inv_diag_ = inv;
        f.plan_ = simd::BandedPlan{length, d, taps->data(), lower->data(), upper->data(), inv->data()};
    }
    return f;
}

double ZeroPhaseHighPass::response(double omega) const noexcept {
    const double c = std::cos(omega);
    const double q = std::pow(2.0 - 2.0 * c, order_);
    const double p = std::pow(2.0 + 2.0 * c, order_);
    return q / (q + alpha_ * p);
}

void ZeroPhaseHighPass::apply_columns(const double* in, double* out, std::size_t width, std::size_t stride) const {
    if (!lu_->pivoted()) {
        simd::kernels().filter_columns(plan_, in, out, width, stride);
        return;
    }
    // Pivoted factors cannot use the kernels; solve column by column.
    const int n = length_, d = order_;
    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < width; ++c) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= 2 * d; ++k) {
                const int src = std::clamp(i + k - d, 0, n - 1);
                acc += num_[static_cast<std::size_t>(k)] * in[static_cast<std::size_t>(src) * stride + c];
            }
            rhs[static_cast<std::size_t>(i)] = acc;
        }
        lu_->solve(rhs);
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i) * stride + c] = rhs[static_cast<std::size_t>(i)];
    }
}

std::vector<double> ZeroPhaseHighPass::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) > length_) {
        throw std::invalid_argument("apply_filter: signal longer than the filter length");
    }
    std::vector<double> padded(static_cast<std::size_t>(length_), 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    if (!x.empty()) std::fill(padded.begin() + static_cast<std::ptrdiff_t>(x.size()), padded.end(), x.back());
    std::vector<double> y(padded.size());
    apply_columns(padded.data(), y.data(), 1, 1);
    return y;
}

DirectionalEdges directional_edges(const GrayImage& img, const ZeroPhaseHighPass& f) {
    const int rows = img.rows(), cols = img.cols(), n = f.length();
    if (rows > n || cols > n) {
        throw std::invalid_argument("extract_edges: image dimension exceeds the filter length");
    }
    DirectionalEdges e;
    const std::size_t count = img.size();

    // Rows: transpose so that each image row becomes a column of the block.
    {
        std::vector<double> block(static_cast<std::size_t>(n) * rows);
        for (int r = 0; r < rows; ++r) {
            const auto src = img.row(r);
            for (int c = 0; c < n; ++c) block[static_cast<std::size_t>(c) * rows + r] = src[std::min(c, cols - 1)];
        }
        std::vector<double> out(block.size());
        f.apply_columns(block.data(), out.data(), static_cast<std::size_t>(rows), static_cast<std::size_t>(rows));
        e.vertical.resize(count);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                e.vertical[static_cast<std::size_t>(r) * cols + c] = out[static_cast<std::size_t>(c) * rows + r];
    }
    // Columns: the image is already laid out with columns contiguous across rows.
    {
        std::vector<double> block(static_cast<std::size_t>(n) * cols);
        std::copy(img.pixels().begin(), img.pixels().end(), block.begin());
        const auto last = img.row(rows - 1);
        for (int r = rows; r < n; ++r)
            std::copy(last.begin(), last.end(), block.begin() + static_cast<std::ptrdiff_t>(r) * cols);
        std::vector<double> out(block.size());
        f.apply_columns(block.data(), out.data(), static_cast<std::size_t>(cols), static_cast<std::size_t>(cols));
        e.horizontal.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(count));
    }
    return e;
}

EdgeImage extract_edges(const GrayImage& img, const ZeroPhaseHighPass& f) {
    const DirectionalEdges d = directional_edges(img, f);
    EdgeImage e{img.rows(), img.cols(), std::vector<double>(img.size())};
    simd::kernels().magnitude(d.vertical.data(), d.horizontal.data(), e.values.data(), e.values.size());
    return e;
}

GrayImage normalized_for_export(const EdgeImage& e) {
    const double peak = e.values.empty() ? 0.0 : *std::max_element(e.values.begin(), e.values.end());
    std::vector<double> v(e.values.size(), 0.0);
    if (peak > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(e.values[i] / peak, 0.0, 1.0);
    }
    return GrayImage(e.rows, e.cols, std::move(v));
}

} // namespace fabric::edge
