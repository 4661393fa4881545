#include "fabric/banded.hpp"

#include <algorithm>
#include <cmath>

namespace fabric::edge {

BandedMatrix::BandedMatrix(int rows, int cols, int lower, int upper)
    : rows_(rows), cols_(cols), lower_(lower), upper_(upper) {
    if (rows < 1 || cols < 1 || lower < 0 || upper < 0) {
        throw std::invalid_argument("BandedMatrix: invalid shape");
    }
    diag_.assign(static_cast<std::size_t>(rows) * (lower + upper + 1), 0.0);
}

double BandedMatrix::get(int i, int j) const noexcept {
    if (!in_band(i, j)) return 0.0;
    return diag_[static_cast<std::size_t>(i) * (lower_ + upper_ + 1) + (j - i + lower_)];
}

void BandedMatrix::set(int i, int j, double v) {
    if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::set outside band");
    diag_[static_cast<std::size_t>(i) * (lower_ + upper_ + 1) + (j - i + lower_)] = v;
}

BandedMatrix BandedMatrix::toeplitz(int rows, int cols, std::span<const double> taps, int offset) {
    // taps[k + offset] sits on diagonal k, for k in [-offset, taps.size() - 1 - offset].
    const int lower = std::max(offset, 0);
    const int upper = std::max(static_cast<int>(taps.size()) - 1 - offset, 0);
    BandedMatrix m(rows, cols, lower, upper);
    for (int i = 0; i < rows; ++i) {
        for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
            const int j = i + t - offset;
            if (j >= 0 && j < cols) m.set(i, j, taps[static_cast<std::size_t>(t)]);
        }
    }
    return m;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("BandedMatrix::multiply: size mismatch");
    std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (int j = std::max(0, i - lower_); j <= std::min(cols_ - 1, i + upper_); ++j) acc += get(i, j) * x[j];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

std::vector<double> BandedMatrix::to_dense() const {
    std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = std::max(0, i - lower_); j <= std::min(cols_ - 1, i + upper_); ++j)
            d[static_cast<std::size_t>(i) * cols_ + j] = get(i, j);
    return d;
}

// =============================================================================
// BandedLU
// =============================================================================

BandedLU::BandedLU(const BandedMatrix& a, Pivoting mode, double pivot_floor) {
    if (a.rows() != a.cols()) throw std::invalid_argument("BandedLU: matrix must be square");
    switch (mode) {
    case Pivoting::Never:
        if (!factor(a, false, pivot_floor)) throw NumericError("BandedLU: zero pivot without pivoting");
        break;
    case Pivoting::Always:
        if (!factor(a, true, 0.0)) throw NumericError("BandedLU: matrix is singular");
        break;
    case Pivoting::Auto:
        if (!factor(a, false, pivot_floor) && !factor(a, true, 0.0)) {
            throw NumericError("BandedLU: matrix is singular");
        }
        break;
    }
}

bool BandedLU::factor(const BandedMatrix& a, bool pivot, double floor) {
    n_ = a.rows();
    kl_ = a.lower();
    const int ku0 = a.upper();
    width_ = 2 * kl_ + ku0 + 1;
    rows_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
    mult_.assign(static_cast<std::size_t>(n_) * std::max(kl_, 1), 0.0);
    perm_.resize(static_cast<std::size_t>(n_));
    pivoted_ = pivot;
    ku_ = pivot ? kl_ + ku0 : ku0;

    auto w = [this](int i, int j) -> double& {
        return rows_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)];
    };

    double scale = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku0); ++j) {
            w(i, j) = a.get(i, j);
            scale = std::max(scale, std::fabs(a.get(i, j)));
        }
    }
    if (scale == 0.0) return false;
    const double tiny = floor * scale;

    for (int k = 0; k < n_; ++k) {
        const int last_row = std::min(n_ - 1, k + kl_);
        const int last_col = std::min(n_ - 1, k + ku_);
        int p = k;
        if (pivot) {
            for (int i = k + 1; i <= last_row; ++i) {
                if (std::fabs(w(i, k)) > std::fabs(w(p, k))) p = i;
            }
            if (p != k) {
                for (int j = k; j <= last_col; ++j) std::swap(w(k, j), w(p, j));
            }
        }
        perm_[static_cast<std::size_t>(k)] = p;
        const double piv = w(k, k);
        if (pivot ? piv == 0.0 : !(std::fabs(piv) >= tiny && std::fabs(piv) > 0.0)) return false;
        for (int i = k + 1; i <= last_row; ++i) {
            const double m = w(i, k) / piv;
            mult_[static_cast<std::size_t>(k) * std::max(kl_, 1) + (i - k - 1)] = m;
            w(i, k) = 0.0;
            if (m == 0.0) continue;
            for (int j = k + 1; j <= last_col; ++j) w(i, j) -= m * w(k, j);
        }
    }
    return true;
}

void BandedLU::solve(std::span<double> b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedLU::solve: size mismatch");
    const int stride = std::max(kl_, 1);
    for (int k = 0; k < n_; ++k) {
        const int p = perm_[static_cast<std::size_t>(k)];
        if (p != k) std::swap(b[k], b[p]);
        for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i) {
            b[i] -= mult_[static_cast<std::size_t>(k) * stride + (i - k - 1)] * b[k];
        }
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j <= std::min(n_ - 1, i + ku_); ++j) acc -= u(i, j) * b[j];
        b[i] = acc / u(i, i);
    }
}

double BandedLU::l(int i, int j) const noexcept {
    if (i <= j || i - j > kl_ || i >= n_ || j < 0) return 0.0;
    return mult_[static_cast<std::size_t>(j) * std::max(kl_, 1) + (i - j - 1)];
}

double BandedLU::u(int i, int j) const noexcept {
    if (j < i || j - i > ku_ || j >= n_ || i < 0) return 0.0;
    return rows_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)];
}

} // namespace fabric::edge
