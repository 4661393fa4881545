/**
 * @file subtract.hpp
 * @brief Reference/test differencing, double thresholding and hysteresis.
 */
#pragma once

#include "fabric/image.hpp"

#include <cstdint>
#include <vector>

namespace fabric::subtract {

/// Per-pixel absolute differences, values in [0,1].
struct DiffMap {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double operator()(int r, int c) const noexcept { return values[static_cast<std::size_t>(r) * cols + c]; }
};

class ThresholdPair {
public:
    static constexpr double kDefaultLow = 0.035;
    static constexpr double kDefaultHigh = 0.150;

    /// Throws std::invalid_argument unless 0 <= low < high <= 1.
    ThresholdPair(double low = kDefaultLow, double high = kDefaultHigh);

    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }

private:
    double low_;
    double high_;
};

enum class Label : std::uint8_t { None = 0, Weak = 1, Strong = 2 };

struct LabelMap {
    int rows = 0;
    int cols = 0;
    std::vector<Label> labels;

    Label operator()(int r, int c) const noexcept { return labels[static_cast<std::size_t>(r) * cols + c]; }
};

/// Throws std::invalid_argument on a dimension mismatch.
DiffMap absolute_difference(const GrayImage& a, const GrayImage& b);

LabelMap double_threshold(const DiffMap& d, const ThresholdPair& t);

/// Strong pixels plus every weak pixel 8-connected to a strong one through weak pixels.
BinaryMask hysteresis(const LabelMap& labels);

/// Promotes hysteresis survivors to Strong and drops the rest to None.
LabelMap promote(const LabelMap& labels);

bool defect_present(const BinaryMask& mask, std::size_t min_defect_pixels = 1);

} // namespace fabric::subtract
