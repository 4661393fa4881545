/**
 * @file image.hpp
 * @brief Image carriers shared by every inspection stage.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fabric {

/// Interleaved 8-bit RGB raster.
class RgbImage {
public:
    RgbImage(int width, int height);
    RgbImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    const std::uint8_t* at(int row, int col) const noexcept {
        return pixels_.data() + 3 * (static_cast<std::size_t>(row) * width_ + col);
    }

    bool operator==(const RgbImage&) const = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Grayscale raster of normalized intensities in [0,1].
///
/// `levels` is the quantization level count L used by histogram stages; a
/// pixel's gray level is floor(v*(L-1) + 0.5).
class GrayImage {
public:
    static constexpr int kDefaultLevels = 256;

    GrayImage(int rows, int cols, double fill = 0.0, int levels = kDefaultLevels);
    GrayImage(int rows, int cols, std::vector<double> pixels, int levels = kDefaultLevels);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    double operator()(int row, int col) const noexcept {
        return pixels_[static_cast<std::size_t>(row) * cols_ + col];
    }
    std::span<const double> pixels() const noexcept { return pixels_; }
    std::span<const double> row(int r) const noexcept {
        return {pixels_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    /// Gray level of a pixel value under this image's quantization.
    int level_of(double v) const noexcept;
    int level(int row, int col) const noexcept { return level_of((*this)(row, col)); }
    double value_of_level(int level) const noexcept { return static_cast<double>(level) / (levels_ - 1); }

    bool same_shape(const GrayImage& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const GrayImage&) const = default;

private:
    int rows_;
    int cols_;
    int levels_;
    std::vector<double> pixels_;
};

/// Row-major {0,1} grid.
class BinaryMask {
public:
    BinaryMask(int rows, int cols);
    BinaryMask(int rows, int cols, std::vector<std::uint8_t> bits);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool operator()(int row, int col) const noexcept {
        return bits_[static_cast<std::size_t>(row) * cols_ + col] != 0;
    }
    void set(int row, int col, bool on = true) noexcept {
        bits_[static_cast<std::size_t>(row) * cols_ + col] = on ? 1 : 0;
    }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<std::uint8_t> bits() noexcept { return bits_; }

    std::size_t count() const noexcept;
    bool same_shape(const BinaryMask& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator==(const BinaryMask&) const = default;

private:
    int rows_;
    int cols_;
    std::vector<std::uint8_t> bits_;
};

/// Per-level pixel counts of a GrayImage.
struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    int levels() const noexcept { return static_cast<int>(counts.size()); }
};

// BT.601 luma, normalized to [0,1].
GrayImage to_grayscale(const RgbImage& img, int levels = GrayImage::kDefaultLevels);

/// Bilinear resampling with corner-aligned grids. Throws std::invalid_argument on a
/// zero target dimension.
GrayImage resize(const GrayImage& img, int target_rows, int target_cols);

Histogram histogram(const GrayImage& img);

/// Quantize to 8 bits (round half up) for export.
std::vector<std::uint8_t> to_bytes(const GrayImage& img);
RgbImage to_rgb(const GrayImage& img);
RgbImage to_rgb(const BinaryMask& mask);

/// Morphological 3x3 dilation.
BinaryMask dilate(const BinaryMask& mask);

} // namespace fabric
