#include "fabric/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fabric::sylvester {

std::vector<double> singular_values(const Matrix& m) {
    const int rows = m.rows(), cols = m.cols();
    // Column-major working copy; rotations act on column pairs.
    std::vector<double> a(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a[static_cast<std::size_t>(c) * rows + r] = m(r, c);
    auto col = [&](int c) { return a.data() + static_cast<std::size_t>(c) * rows; };

    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double* x = col(p);
                double* y = col(q);
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int i = 0; i < rows; ++i) {
                    alpha += x[i] * x[i];
                    beta += y[i] * y[i];
                    gamma += x[i] * y[i];
                }
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::fabs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int i = 0; i < rows; ++i) {
                    const double xi = x[i], yi = y[i];
                    x[i] = cs * xi - sn * yi;
                    y[i] = sn * xi + cs * yi;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
        const double* x = col(c);
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += x[i] * x[i];
        sv[static_cast<std::size_t>(c)] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

int numerical_rank(const Matrix& m, double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("numerical_rank: tolerance must lie in (0, 1)");
    const std::vector<double> sv = singular_values(m);
    if (sv.empty() || sv.front() == 0.0) return 0;
    const double cut = tol * sv.front();
    return static_cast<int>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

double intensity_from_rank(int rank, int n) noexcept {
    if (n <= 0) return 0.0;
    return std::clamp(static_cast<double>(rank - n) / n, 0.0, 1.0);
}

int tile_rank(const Matrix& c, const Matrix& d, double tol) {
    if (c.rows() != c.cols() || c.rows() != d.rows() || c.cols() != d.cols()) {
        throw std::invalid_argument("tile_rank: tiles must be square and of equal size");
    }
    double peak = 0.0;
    for (double v : c.data()) peak = std::max(peak, std::fabs(v));
    for (double v : d.data()) peak = std::max(peak, std::fabs(v));

    Matrix cs = c, ds = d;
    if (peak > 0.0) {
        int e = 0;
        std::frexp(peak, &e);
        for (int r = 0; r < c.rows(); ++r)
            for (int k = 0; k < c.cols(); ++k) {
                cs(r, k) = std::ldexp(c(r, k), 1 - e);
                ds(r, k) = std::ldexp(d(r, k), 1 - e);
            }
    }
    const CharPoly pc = normalize(characteristic_polynomial(cs));
    const CharPoly pd = normalize(characteristic_polynomial(ds));
    return numerical_rank(build_sylvester(pc, pd).s, tol);
}

} // namespace fabric::sylvester
