#include "fabric/registration.hpp"

#include <algorithm>
#include <cmath>

namespace fabric::registration {

namespace {

inline bool inside(double u, double v, int rows, int cols) {
    return u >= 0.0 && v >= 0.0 && u <= cols - 1 && v <= rows - 1;
}

} // namespace

GrayImage warp_image(const GrayImage& test, const AffineTransform& t, int out_rows, int out_cols) {
    if (!(std::fabs(t.determinant()) > 1e-12)) {
        throw std::invalid_argument("warp_image: singular transform");
    }
    if (out_rows <= 0) out_rows = test.rows();
    if (out_cols <= 0) out_cols = test.cols();
    const int rows = test.rows(), cols = test.cols();
    std::vector<double> out(static_cast<std::size_t>(out_rows) * out_cols, 0.0);
    for (int y = 0; y < out_rows; ++y) {
        for (int x = 0; x < out_cols; ++x) {
            const Point p = t.apply({static_cast<double>(x), static_cast<double>(y)});
            if (!inside(p.x, p.y, rows, cols)) continue;
            const int x0 = static_cast<int>(std::floor(p.x));
            const int y0 = static_cast<int>(std::floor(p.y));
            const double fx = p.x - x0, fy = p.y - y0;
            const int x1 = fx > 0.0 ? x0 + 1 : x0;
            const int y1 = fy > 0.0 ? y0 + 1 : y0;
            const double top = test(y0, x0) + (test(y0, x1) - test(y0, x0)) * fx;
            const double bot = test(y1, x0) + (test(y1, x1) - test(y1, x0)) * fx;
            out[static_cast<std::size_t>(y) * out_cols + x] = std::clamp(top + (bot - top) * fy, 0.0, 1.0);
        }
    }
    return GrayImage(out_rows, out_cols, std::move(out), test.levels());
}

BinaryMask warp_coverage(const AffineTransform& t, int test_rows, int test_cols, int out_rows, int out_cols) {
    BinaryMask m(out_rows, out_cols);
    for (int y = 0; y < out_rows; ++y) {
        for (int x = 0; x < out_cols; ++x) {
            const Point p = t.apply({static_cast<double>(x), static_cast<double>(y)});
            m.set(y, x, inside(p.x, p.y, test_rows, test_cols));
        }
    }
    return m;
}

} // namespace fabric::registration
