/**
 * @file enhance.hpp
 * @brief Contrast correction against a reference (histogram specification) and
 *        median-mean sub-image clipped histogram equalization (MMSICHE).
 */
#pragma once

#include "fabric/image.hpp"

#include <array>
#include <vector>

namespace fabric::enhance {

/// Median level and the count-weighted means of the halves on either side.
struct MedianSplit {
    int median = 0;     ///< X_e
    int lower_mean = 0; ///< X_ml
    int upper_mean = 0; ///< X_mu
};

struct ClippedHistogram {
    std::vector<double> counts; ///< H_c
    double threshold = 0.0;     ///< T_c
};

/// Inclusive gray-level range; empty when first > last.
struct LevelRange {
    int first = 0;
    int last = -1;

    bool empty() const noexcept { return first > last; }
    bool contains(int l) const noexcept { return l >= first && l <= last; }
};

/// The four sub-histograms W_Ll, W_Lu, W_Ul, W_Uu and their clipped totals.
struct SubHistogramPartition {
    std::array<LevelRange, 4> ranges;
    std::array<double, 4> totals{};
};

/// Level-to-level lookup: output level for each input level.
using LevelMap = std::vector<int>;

/// Inverse-CDF matching of `test` onto the reference histogram. Ties go to the
/// smaller output level. Throws std::invalid_argument on an empty reference or
/// a level-count mismatch.
LevelMap specification_map(const Histogram& test_hist, const Histogram& ref_hist);
GrayImage histogram_specification(const GrayImage& test, const Histogram& ref_hist);

MedianSplit median_split(const Histogram& hist);
ClippedHistogram clip_histogram(const Histogram& hist);
SubHistogramPartition partition(const MedianSplit& split, const ClippedHistogram& clipped);

LevelMap mmsiche_map(const Histogram& hist);
GrayImage mmsiche(const GrayImage& img);

/// Applies a level map to every pixel of an image.
GrayImage apply_level_map(const GrayImage& img, const LevelMap& map);

} // namespace fabric::enhance
