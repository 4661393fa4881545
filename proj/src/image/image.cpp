#include "fabric/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fabric {

// =============================================================================
// RgbImage
// =============================================================================

RgbImage::RgbImage(int width, int height)
    : RgbImage(width, height,
               std::vector<std::uint8_t>(3 * static_cast<std::size_t>(std::max(width, 0)) *
                                         static_cast<std::size_t>(std::max(height, 0)))) {}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("RgbImage: dimensions must be positive");
    }
    if (pixels_.size() != 3 * static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("RgbImage: buffer length must be 3*width*height");
    }
}

// =============================================================================
// GrayImage
// =============================================================================

GrayImage::GrayImage(int rows, int cols, double fill, int levels)
    : GrayImage(rows, cols,
                std::vector<double>(static_cast<std::size_t>(std::max(rows, 0)) *
                                        static_cast<std::size_t>(std::max(cols, 0)),
                                    fill),
                levels) {}

GrayImage::GrayImage(int rows, int cols, std::vector<double> pixels, int levels)
    : rows_(rows), cols_(cols), levels_(levels), pixels_(std::move(pixels)) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("GrayImage: dimensions must be positive");
    }
    if (levels < 2) {
        throw std::invalid_argument("GrayImage: need at least 2 quantization levels");
    }
    if (pixels_.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("GrayImage: pixel count must equal rows*cols");
    }
    for (double v : pixels_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("GrayImage: pixel outside [0,1]: " + std::to_string(v));
        }
    }
}

int GrayImage::level_of(double v) const noexcept {
    const int l = static_cast<int>(std::floor(v * (levels_ - 1) + 0.5));
    return std::clamp(l, 0, levels_ - 1);
}

// =============================================================================
// BinaryMask
// =============================================================================

BinaryMask::BinaryMask(int rows, int cols)
    : BinaryMask(rows, cols,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(rows, 0)) *
                                           static_cast<std::size_t>(std::max(cols, 0)))) {}

BinaryMask::BinaryMask(int rows, int cols, std::vector<std::uint8_t> bits)
    : rows_(rows), cols_(cols), bits_(std::move(bits)) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("BinaryMask: dimensions must be positive");
    }
    if (bits_.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("BinaryMask: bit count must equal rows*cols");
    }
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

// =============================================================================
// Conversions
// =============================================================================

GrayImage to_grayscale(const RgbImage& img, int levels) {
    const auto src = img.pixels();
    std::vector<double> out(static_cast<std::size_t>(img.width()) * img.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
        double v;
        if (r == g && g == b) {
            // Exact for gray inputs; the weights sum to 1.
            v = r / 255.0;
        } else {
            v = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
        }
        out[i] = std::clamp(v, 0.0, 1.0);
    }
    return GrayImage(img.height(), img.width(), std::move(out), levels);
}

namespace {

struct Tap {
    int i0;
    int i1;
    double t;
};

// Corner-aligned source coordinates for each destination index.
std::vector<Tap> resample_taps(int src, int dst) {
    std::vector<Tap> taps(static_cast<std::size_t>(dst));
    for (int j = 0; j < dst; ++j) {
        double s;
        if (dst == 1) {
            s = (src - 1) / 2.0;
        } else {
            s = static_cast<double>(j) * (src - 1) / (dst - 1);
        }
        int i0 = static_cast<int>(std::floor(s));
        i0 = std::clamp(i0, 0, src - 1);
        const double t = s - i0;
        const int i1 = t > 0.0 ? std::min(i0 + 1, src - 1) : i0;
        taps[static_cast<std::size_t>(j)] = {i0, i1, t};
    }
    return taps;
}

} // namespace

GrayImage resize(const GrayImage& img, int target_rows, int target_cols) {
    if (target_rows < 1 || target_cols < 1) {
        throw std::invalid_argument("resize: target dimensions must be >= 1");
    }
    if (target_rows == img.rows() && target_cols == img.cols()) {
        return img;
    }
    const auto ry = resample_taps(img.rows(), target_rows);
    const auto rx = resample_taps(img.cols(), target_cols);
    std::vector<double> out(static_cast<std::size_t>(target_rows) * target_cols);
    for (int r = 0; r < target_rows; ++r) {
        const Tap& ty = ry[static_cast<std::size_t>(r)];
        const auto row0 = img.row(ty.i0);
        const auto row1 = img.row(ty.i1);
        for (int c = 0; c < target_cols; ++c) {
            const Tap& tx = rx[static_cast<std::size_t>(c)];
            const double top = row0[tx.i0] + (row0[tx.i1] - row0[tx.i0]) * tx.t;
            const double bot = row1[tx.i0] + (row1[tx.i1] - row1[tx.i0]) * tx.t;
            const double v = top + (bot - top) * ty.t;
            out[static_cast<std::size_t>(r) * target_cols + c] = std::clamp(v, 0.0, 1.0);
        }
    }
    return GrayImage(target_rows, target_cols, std::move(out), img.levels());
}

Histogram histogram(const GrayImage& img) {
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(img.levels()), 0);
    for (double v : img.pixels()) {
        ++h.counts[static_cast<std::size_t>(img.level_of(v))];
    }
    h.total = img.size();
    return h;
}

std::vector<std::uint8_t> to_bytes(const GrayImage& img) {
    std::vector<std::uint8_t> out(img.size());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::clamp(std::floor(px[i] * 255.0 + 0.5), 0.0, 255.0));
    }
    return out;
}

RgbImage to_rgb(const GrayImage& img) {
    const auto bytes = to_bytes(img);
    std::vector<std::uint8_t> rgb(3 * bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = bytes[i];
    }
    return RgbImage(img.cols(), img.rows(), std::move(rgb));
}

RgbImage to_rgb(const BinaryMask& mask) {
    std::vector<std::uint8_t> rgb(3 * mask.size());
    const auto bits = mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::uint8_t v = bits[i] ? 255 : 0;
        rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = v;
    }
    return RgbImage(mask.cols(), mask.rows(), std::move(rgb));
}

BinaryMask dilate(const BinaryMask& mask) {
    BinaryMask out(mask.rows(), mask.cols());
    for (int r = 0; r < mask.rows(); ++r) {
        for (int c = 0; c < mask.cols(); ++c) {
            if (!mask(r, c)) continue;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < mask.rows() && cc >= 0 && cc < mask.cols()) out.set(rr, cc);
                }
            }
        }
    }
    return out;
}

} // namespace fabric
