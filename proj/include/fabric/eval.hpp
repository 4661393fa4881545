/**
 * @file eval.hpp
 * @brief Binary similarity, confusion metrics and the synthetic fabric generator.
 */
#pragma once

#include "fabric/image.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fabric::eval {

/// gamma = |1 - (2 / pq) * sum(a xor b)|. Throws std::invalid_argument on a shape mismatch.
double binary_similarity(const BinaryMask& a, const BinaryMask& b);

/// Fraction of truth pixels also set in detected; absent when truth is empty.
std::optional<double> truth_coverage(const BinaryMask& detected, const BinaryMask& truth);

struct Decision {
    bool predicted = false;
    bool actual = false;
};

struct ConfusionMetrics {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> fp_rate;
    std::optional<double> fn_rate;
};

/// Throws std::invalid_argument on an empty list.
ConfusionMetrics confusion_metrics(const std::vector<Decision>& decisions);

struct EvalReport {
    std::optional<double> gamma;
    std::optional<ConfusionMetrics> confusion;
    std::vector<std::pair<std::string, long long>> timings_ms; ///< stage order preserved

    /// JSON object with keys gamma, accuracy, precision, recall, fp_rate,
    /// fn_rate, timings_ms; undefined values are omitted.
    std::string to_json() const;
};

// -----------------------------------------------------------------------------
// Synthetic pairs
// -----------------------------------------------------------------------------

enum class DefectKind { None, LineBreak, Spot, Tear, IlluminationSpot };

/// Throws std::invalid_argument for an unknown name.
DefectKind parse_defect_kind(const std::string& name);
std::string defect_kind_name(DefectKind kind);

/// Geometry in reference-frame pixels. Fields a kind does not use are ignored.
struct DefectSpec {
    DefectKind kind = DefectKind::None;
    double center_row = 512.0;
    double center_col = 512.0;
    double radius = 6.0;   ///< spot
    double length = 60.0;  ///< line-break, tear
    double width = 2.0;    ///< line-break, tear
    double angle = 0.0;    ///< radians, line-break and tear orientation
};

/// Random geometry for a kind, placed away from the image border.
DefectSpec random_defect(DefectKind kind, std::uint64_t seed, int rows = 1024, int cols = 1024);

/// Pixels whose centers fall inside the painted defect (before dilation).
BinaryMask defect_footprint(const DefectSpec& spec, int rows, int cols);

struct SynthOptions {
    int rows = 1024;
    int cols = 1024;
    bool skew = true;         ///< small random rotation and shift of the test view
    bool illumination = true; ///< gain ramp and global gain/offset on the test view
};

struct SyntheticPair {
    GrayImage reference;
    GrayImage test;
    BinaryMask truth; ///< defect footprint dilated by one pixel, reference frame
};

/// Deterministic in (seed, spec, options). Throws std::invalid_argument on bad sizes.
SyntheticPair generate_synthetic_pair(std::uint64_t seed, const DefectSpec& spec, const SynthOptions& opt = {});

} // namespace fabric::eval
