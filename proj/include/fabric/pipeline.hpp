/**
 * @file pipeline.hpp
 * @brief End-to-end inspection of reference/test pairs, configuration and batches.
 */
#pragma once

#include "fabric/eval.hpp"
#include "fabric/image.hpp"
#include "fabric/registration.hpp"
#include "fabric/sylvester.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fabric::pipeline {

struct PipelineConfig {
    int levels = 256;
    int resize_rows = 1024;
    int resize_cols = 1024;
    double ht_min = 0.035;
    double ht_max = 0.150;
    int filter_order = 3;
    double filter_cutoff = 0.9;
    int filter_length = 1024;
    int tile = 8;
    int stride = 8;
    double rank_tolerance = 1e-8;
    double theta = 0.25;
    int min_defect_pixels = 1;
    std::uint64_t ransac_seed = 42;
    int ransac_iterations = 1000;
    double ransac_inlier_radius = 2.0;
    int workers = 1;

    bool operator==(const PipelineConfig&) const = default;
};

/// Throws std::invalid_argument naming the first offending parameter.
void validate(const PipelineConfig& cfg);

/// "key = value" lines, '#' comments, unknown keys rejected. Missing keys keep
/// their defaults. Throws std::invalid_argument with the line number on error.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Every key, one per line; parse_config(format_config(c)) == c.
std::string format_config(const PipelineConfig& cfg);

/// INSPECT_WORKERS when set to a positive integer, otherwise cfg.workers.
int effective_workers(const PipelineConfig& cfg);

// -----------------------------------------------------------------------------
// Single pair
// -----------------------------------------------------------------------------

using StageTimings = std::vector<std::pair<std::string, long long>>;

struct PairResult {
    bool defect_present = false;  ///< hysteresis mask reached min_defect_pixels
    bool detected = false;        ///< at least one pixel with intensity >= theta
    bool edges_computed = false;  ///< false when the pair short-circuited
    BinaryMask difference_mask{1, 1};
    BinaryMask defect_mask{1, 1};
    std::optional<sylvester::DefectMap> defect_map;
    registration::AffineTransform transform;
    std::size_t inliers = 0;
    std::optional<double> gamma;    ///< against truth, when supplied
    std::optional<double> coverage; ///< fraction of truth pixels in defect_mask
    StageTimings timings_ms;

    std::string status() const { return detected ? "defective" : "defect-free"; }
};

/// Runs enhancement through fault mapping on decoded images. Throws on
/// invalid configuration, mismatched truth dimensions or registration failure.
PairResult inspect_pair(const GrayImage& reference, const GrayImage& test, const PipelineConfig& cfg,
                        const std::optional<BinaryMask>& truth = std::nullopt);

/// Loads, inspects and (when out_dir is set) writes mask.png, intensity.png,
/// tiles.csv and report.json under out_dir.
PairResult run_pair(const std::filesystem::path& reference, const std::filesystem::path& test,
                    const PipelineConfig& cfg, const std::optional<std::filesystem::path>& truth = std::nullopt,
                    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// JSON report of one pair; error is set for failed pairs.
std::string pair_report_json(const std::string& id, const PairResult* result, const std::string& error = {});

// -----------------------------------------------------------------------------
// Batch
// -----------------------------------------------------------------------------

struct ManifestEntry {
    int line = 0;
    std::filesystem::path reference;
    std::filesystem::path test;
    std::optional<std::filesystem::path> truth;
    std::optional<bool> label; ///< true = defective
};

/// CSV "reference,test[,truth,label]"; relative paths resolve against the
/// manifest's directory. Blank lines, '#' comments and a leading header are
/// skipped. Throws std::invalid_argument naming the line of a malformed entry
/// or when no entries remain.
std::vector<ManifestEntry> parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct BatchPair {
    std::string id;
    ManifestEntry entry;
    std::optional<PairResult> result;
    std::string error;
};

struct BatchResult {
    std::vector<BatchPair> pairs; ///< manifest order
    eval::EvalReport report;      ///< confusion over labelled pairs, mean gamma over defective ones
    std::optional<double> mean_gamma;
    std::size_t failures = 0;

    std::string to_json() const;
};

/// Runs every entry with up to effective_workers(cfg) pairs in flight. Results
/// apart from timings do not depend on the worker count.
BatchResult run_batch(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Confusion metrics and mean gamma folded from per-pair outcomes.
void aggregate(BatchResult& batch);

} // namespace fabric::pipeline
