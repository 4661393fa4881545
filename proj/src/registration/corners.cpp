#include "fabric/registration.hpp"

#include <algorithm>
#include <stdexcept>

namespace fabric::registration {

namespace {

// Central differences leave a 1-px band; the 5-tap smoothing window adds 2 more.
constexpr int kBorder = 3;
constexpr double kSmooth[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

void smooth_separable(std::vector<double>& img, int rows, int cols) {
    std::vector<double> tmp(img.size(), 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 2; c < cols - 2; ++c) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) acc += kSmooth[k + 2] * img[static_cast<std::size_t>(r) * cols + c + k];
            tmp[static_cast<std::size_t>(r) * cols + c] = acc;
        }
    }
    std::fill(img.begin(), img.end(), 0.0);
    for (int r = 2; r < rows - 2; ++r) {
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) acc += kSmooth[k + 2] * tmp[static_cast<std::size_t>(r + k) * cols + c];
            img[static_cast<std::size_t>(r) * cols + c] = acc;
        }
    }
}

} // namespace

std::vector<double> harris_response(const GrayImage& img, double k) {
    const int rows = img.rows(), cols = img.cols();
    const std::size_t n = img.size();
    std::vector<double> ixx(n, 0.0), iyy(n, 0.0), ixy(n, 0.0);
    for (int r = 1; r < rows - 1; ++r) {
        for (int c = 1; c < cols - 1; ++c) {
            const double gx = 0.5 * (img(r, c + 1) - img(r, c - 1));
            const double gy = 0.5 * (img(r + 1, c) - img(r - 1, c));
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            ixx[i] = gx * gx;
            iyy[i] = gy * gy;
            ixy[i] = gx * gy;
        }
    }
    smooth_separable(ixx, rows, cols);
    smooth_separable(iyy, rows, cols);
    smooth_separable(ixy, rows, cols);

    std::vector<double> resp(n, 0.0);
    for (int r = kBorder; r < rows - kBorder; ++r) {
        for (int c = kBorder; c < cols - kBorder; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            const double det = ixx[i] * iyy[i] - ixy[i] * ixy[i];
            const double tr = ixx[i] + iyy[i];
            resp[i] = det - k * tr * tr;
        }
    }
    return resp;
}

std::vector<Corner> detect_corners(const GrayImage& img, int max_corners, const CornerOptions& opt) {
    if (img.rows() < 16 || img.cols() < 16) {
        throw std::invalid_argument("detect_corners: image must be at least 16x16");
    }
    if (max_corners <= 0) return {};
    const int rows = img.rows(), cols = img.cols();
    const auto resp = harris_response(img, opt.harris_k);
    const double peak = *std::max_element(resp.begin(), resp.end());
    if (!(peak > 0.0)) return {};
    const double floor_resp = opt.quality * peak;

    // Candidates: positive 3x3 local maxima above the quality floor.
    std::vector<Corner> cand;
    for (int r = kBorder; r < rows - kBorder; ++r) {
        for (int c = kBorder; c < cols - kBorder; ++c) {
            const double v = resp[static_cast<std::size_t>(r) * cols + c];
            if (v <= 0.0 || v < floor_resp) continue;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (resp[static_cast<std::size_t>(r + dr) * cols + c + dc] > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) cand.push_back({r, c, v});
        }
    }
    std::sort(cand.begin(), cand.end(), [](const Corner& a, const Corner& b) {
        if (a.response != b.response) return a.response > b.response;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });

    // Greedy suppression in (response, row, col) order.
    const int rad = opt.suppression_radius;
    std::vector<std::uint8_t> taken(img.size(), 0);
    std::vector<Corner> out;
    for (const Corner& cnd : cand) {
        bool free = true;
        for (int dr = -rad; dr <= rad && free; ++dr) {
            const int rr = cnd.row + dr;
            if (rr < 0 || rr >= rows) continue;
            for (int dc = -rad; dc <= rad; ++dc) {
                const int cc = cnd.col + dc;
                if (cc < 0 || cc >= cols || dr * dr + dc * dc > rad * rad) continue;
                if (taken[static_cast<std::size_t>(rr) * cols + cc]) {
                    free = false;
                    break;
                }
            }
        }
        if (!free) continue;
        taken[static_cast<std::size_t>(cnd.row) * cols + cnd.col] = 1;
        out.push_back(cnd);
        if (static_cast<int>(out.size()) == max_corners) break;
    }
    return out;
}

} // namespace fabric::registration
