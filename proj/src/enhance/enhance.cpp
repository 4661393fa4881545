#include "fabric/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fabric::enhance {

namespace {

void require_mass(const Histogram& h, const char* what) {
    if (h.counts.empty() || h.total == 0) {
        throw std::invalid_argument(std::string(what) + ": histogram has no mass");
    }
}

} // namespace

GrayImage apply_level_map(const GrayImage& img, const LevelMap& map) {
    if (static_cast<int>(map.size()) != img.levels()) {
        throw std::invalid_argument("apply_level_map: map size must equal level count");
    }
    std::vector<double> out(img.size());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = img.value_of_level(map[static_cast<std::size_t>(img.level_of(px[i]))]);
    }
    return GrayImage(img.rows(), img.cols(), std::move(out), img.levels());
}

// =============================================================================
// Histogram specification
// =============================================================================

LevelMap specification_map(const Histogram& test_hist, const Histogram& ref_hist) {
    require_mass(ref_hist, "histogram_specification");
    require_mass(test_hist, "histogram_specification");
    if (test_hist.counts.size() != ref_hist.counts.size()) {
        throw std::invalid_argument("histogram_specification: level counts differ");
    }
    const std::size_t levels = ref_hist.counts.size();
    // Compare CDFs exactly: ref_cum/ref_total >= test_cum/test_total.
    using wide = unsigned __int128;
    LevelMap map(levels);
    std::uint64_t test_cum = 0;
    std::uint64_t ref_cum = ref_hist.counts[0];
    std::size_t z = 0;
    for (std::size_t i = 0; i < levels; ++i) {
        test_cum += test_hist.counts[i];
        while (z + 1 < levels &&
               static_cast<wide>(ref_cum) * test_hist.total < static_cast<wide>(test_cum) * ref_hist.total) {
            ++z;
            ref_cum += ref_hist.counts[z];
        }
        map[i] = static_cast<int>(z);
    }
    return map;
}

GrayImage histogram_specification(const GrayImage& test, const Histogram& ref_hist) {
    if (ref_hist.levels() != test.levels()) {
        throw std::invalid_argument("histogram_specification: reference has a different level count");
    }
    return apply_level_map(test, specification_map(histogram(test), ref_hist));
}

// =============================================================================
// MMSICHE
// =============================================================================

MedianSplit median_split(const Histogram& hist) {
    require_mass(hist, "median_split");
    const int levels = hist.levels();
    MedianSplit s;
    std::uint64_t cum = 0;
    int median = levels - 1;
    for (int i = 0; i < levels; ++i) {
        cum += hist.counts[static_cast<std::size_t>(i)];
        if (2 * cum >= hist.total) {
            median = i;
            break;
        }
    }
    s.median = median;

    auto weighted_floor_mean = [&](int first, int last, int fallback) {
        std::uint64_t mass = 0;
        std::uint64_t moment = 0;
        for (int i = first; i <= last; ++i) {
            mass += hist.counts[static_cast<std::size_t>(i)];
            moment += hist.counts[static_cast<std::size_t>(i)] * static_cast<std::uint64_t>(i);
        }
        return mass == 0 ? fallback : static_cast<int>(moment / mass);
    };
    s.lower_mean = weighted_floor_mean(0, median, median);
    s.upper_mean = weighted_floor_mean(median + 1, levels - 1, median);
    return s;
}

ClippedHistogram clip_histogram(const Histogram& hist) {
    require_mass(hist, "clip_histogram");
    std::vector<std::uint64_t> occupied;
    for (auto c : hist.counts) {
        if (c > 0) occupied.push_back(c);
    }
    std::sort(occupied.begin(), occupied.end());
    const std::size_t m = occupied.size();
    const double tc = (m % 2 == 1) ? static_cast<double>(occupied[m / 2])
                                   : (static_cast<double>(occupied[m / 2 - 1]) + static_cast<double>(occupied[m / 2])) / 2.0;
    ClippedHistogram out;
    out.threshold = tc;
    out.counts.resize(hist.counts.size());
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        out.counts[i] = std::min(static_cast<double>(hist.counts[i]), tc);
    }
    return out;
}

SubHistogramPartition partition(const MedianSplit& split, const ClippedHistogram& clipped) {
    const int last_level = static_cast<int>(clipped.counts.size()) - 1;
    SubHistogramPartition p;
    p.ranges = {LevelRange{0, split.lower_mean}, LevelRange{split.lower_mean + 1, split.median},
                LevelRange{split.median + 1, split.upper_mean}, LevelRange{split.upper_mean + 1, last_level}};
    for (std::size_t k = 0; k < 4; ++k) {
        double total = 0.0;
        for (int i = p.ranges[k].first; i <= p.ranges[k].last; ++i) total += clipped.counts[static_cast<std::size_t>(i)];
        p.totals[k] = total;
    }
    return p;
}

LevelMap mmsiche_map(const Histogram& hist) {
    const MedianSplit split = median_split(hist);
    const ClippedHistogram clipped = clip_histogram(hist);
    const SubHistogramPartition parts = partition(split, clipped);

    LevelMap map(hist.counts.size());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);

    for (std::size_t k = 0; k < 4; ++k) {
        const LevelRange range = parts.ranges[k];
        const double total = parts.totals[k];
        if (range.empty() || total <= 0.0) continue; // identity
        const double span = static_cast<double>(range.last - range.first);
        double cum = 0.0;
        for (int i = range.first; i <= range.last; ++i) {
            cum += clipped.counts[static_cast<std::size_t>(i)];
            const double f = range.first + span * cum / total;
            const int level = static_cast<int>(std::floor(f + 0.5));
            map[static_cast<std::size_t>(i)] = std::clamp(level, range.first, range.last);
        }
    }
    return map;
}

GrayImage mmsiche(const GrayImage& img) {
    return apply_level_map(img, mmsiche_map(histogram(img)));
}

} // namespace fabric::enhance
