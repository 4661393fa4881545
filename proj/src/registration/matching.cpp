#include "fabric/registration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace fabric::registration {

namespace {

// Summed-area tables of v and v^2 with a zero top row / left column.
struct Integral {
    int rows, cols;
    std::vector<double> s1, s2;

    explicit Integral(const GrayImage& img)
        : rows(img.rows()), cols(img.cols()),
          s1(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0),
          s2(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {
        for (int r = 0; r < rows; ++r) {
            double row1 = 0.0, row2 = 0.0;
            for (int c = 0; c < cols; ++c) {
                const double v = img(r, c);
                row1 += v;
                row2 += v * v;
                s1[at(r + 1, c + 1)] = s1[at(r, c + 1)] + row1;
                s2[at(r + 1, c + 1)] = s2[at(r, c + 1)] + row2;
            }
        }
    }

    std::size_t at(int r, int c) const { return static_cast<std::size_t>(r) * (cols + 1) + c; }

    // Box [r0, r1) x [c0, c1).
    void box(int r0, int c0, int r1, int c1, double& sum, double& sumsq) const {
        sum = s1[at(r1, c1)] - s1[at(r0, c1)] - s1[at(r1, c0)] + s1[at(r0, c0)];
        sumsq = s2[at(r1, c1)] - s2[at(r0, c1)] - s2[at(r1, c0)] + s2[at(r0, c0)];
    }
};

} // namespace

CorrespondenceSet match_correspondences(const GrayImage& ref, const GrayImage& test,
                                        const std::vector<Corner>& ref_corners, const MatchOptions& opt) {
    if (!ref.same_shape(test)) {
        throw std::invalid_argument("match_correspondences: images must have identical dimensions");
    }
    const int pr = opt.patch_radius;
    const int side = 2 * pr + 1;
    const double npx = static_cast<double>(side * side);
    const int rows = ref.rows(), cols = ref.cols();
    const Integral integral(test);

    CorrespondenceSet out;
    std::vector<double> patch(static_cast<std::size_t>(side * side));
    for (const Corner& corner : ref_corners) {
        const int y = corner.row, x = corner.col;
        if (y - pr < 0 || x - pr < 0 || y + pr >= rows || x + pr >= cols) continue;

        double mean = 0.0;
        for (int dy = -pr; dy <= pr; ++dy)
            for (int dx = -pr; dx <= pr; ++dx) mean += ref(y + dy, x + dx);
        mean /= npx;
        double var_a = 0.0;
        std::size_t k = 0;
        for (int dy = -pr; dy <= pr; ++dy) {
            for (int dx = -pr; dx <= pr; ++dx) {
                const double v = ref(y + dy, x + dx) - mean;
                patch[k++] = v;
                var_a += v * v;
            }
        }
        if (var_a <= 1e-12) continue;

        auto ncc_at = [&](int cx, int cy) {
            if (cy - pr < 0 || cy + pr >= rows || cx - pr < 0 || cx + pr >= cols) return -2.0;
            double sum, sumsq;
            integral.box(cy - pr, cx - pr, cy + pr + 1, cx + pr + 1, sum, sumsq);
            const double var_b = sumsq - sum * sum / npx;
            if (var_b <= 1e-12) return -2.0;
            // The reference patch is zero-mean, so the test mean drops out.
            double cross = 0.0;
            std::size_t i = 0;
            for (int dy = -pr; dy <= pr; ++dy) {
                const auto trow = test.row(cy + dy);
                for (int dx = -pr; dx <= pr; ++dx) cross += patch[i++] * trow[cx + dx];
            }
            return cross / std::sqrt(var_a * var_b);
        };

        double best = -2.0;
        int best_x = 0, best_y = 0;
        for (int oy = -opt.search_radius; oy <= opt.search_radius; ++oy) {
            for (int ox = -opt.search_radius; ox <= opt.search_radius; ++ox) {
                const double ncc = ncc_at(x + ox, y + oy);
                if (ncc > best) {
                    best = ncc;
                    best_x = x + ox;
                    best_y = y + oy;
                }
            }
        }
        if (best < opt.min_ncc) continue;

        // Parabola through the peak and its two neighbours on each axis.
        auto refine = [best](double before, double after) {
            if (before < -1.5 || after < -1.5) return 0.0;
            const double curvature = before - 2.0 * best + after;
            if (curvature >= 0.0) return 0.0;
            return std::clamp(0.5 * (before - after) / curvature, -0.5, 0.5);
        };
        const double fx = refine(ncc_at(best_x - 1, best_y), ncc_at(best_x + 1, best_y));
        const double fy = refine(ncc_at(best_x, best_y - 1), ncc_at(best_x, best_y + 1));
        out.push_back({{static_cast<double>(x), static_cast<double>(y)},
                       {best_x + fx, best_y + fy},
                       std::min(best, 1.0)});
    }
    return out;
}

void write_correspondences_csv(std::ostream& out, const CorrespondenceSet& pairs) {
    for (const auto& p : pairs) {
        out << p.ref.x << ',' << p.ref.y << ',' << p.test.x << ',' << p.test.y << ',' << p.score << '\n';
    }
}

} // namespace fabric::registration
