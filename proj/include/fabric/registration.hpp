/**
 * @file registration.hpp
 * @brief Affine alignment of the test image onto the reference grid.
 *
 * Coordinates are (x, y) = (column, row). The affine map takes a reference
 * coordinate to the corresponding test coordinate:
 *
 *     x' = a11*x + a12*y + tx
 *     y' = a21*x + a22*y + ty
 */
#pragma once

#include "fabric/image.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace fabric::registration {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct AffineTransform {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
    double tx = 0.0, ty = 0.0;

    static AffineTransform identity() { return {}; }

    Point apply(Point p) const noexcept {
        return {a11 * p.x + a12 * p.y + tx, a21 * p.x + a22 * p.y + ty};
    }
    double determinant() const noexcept { return a11 * a22 - a12 * a21; }
    /// Throws std::invalid_argument when the linear part is singular.
    AffineTransform inverse() const;
};

struct Correspondence {
    Point ref;
    Point test;
    double score = 0.0; ///< match quality in [0,1]
};

using CorrespondenceSet = std::vector<Correspondence>;

/// No usable model could be fitted.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// -----------------------------------------------------------------------------
// Corners
// -----------------------------------------------------------------------------

struct CornerOptions {
    double harris_k = 0.04;
    int suppression_radius = 5;
    double quality = 0.01; ///< minimum response as a fraction of the strongest
};

struct Corner {
    int row = 0;
    int col = 0;
    double response = 0.0;
};

/// Harris response maxima, strongest first; ties broken by (row, col).
/// Requires at least a 16x16 image.
std::vector<Corner> detect_corners(const GrayImage& img, int max_corners, const CornerOptions& opt = {});

/// Full Harris response map (zero in the border band where it is undefined).
std::vector<double> harris_response(const GrayImage& img, double k = 0.04);

// -----------------------------------------------------------------------------
// Matching
// -----------------------------------------------------------------------------

struct MatchOptions {
    int patch_radius = 5;    ///< 11x11 patches
    int search_radius = 16;  ///< 32-px search window
    double min_ncc = 0.7;
};

/// Best zero-mean NCC match in `test` for each reference corner, refined to
/// sub-pixel precision by a parabola fit on each axis; weak matches dropped.
CorrespondenceSet match_correspondences(const GrayImage& ref, const GrayImage& test,
                                        const std::vector<Corner>& ref_corners,
                                        const MatchOptions& opt = {});

/// CSV debug dump, one "rx,ry,tx,ty,score" line per pair.
void write_correspondences_csv(std::ostream& out, const CorrespondenceSet& pairs);

// -----------------------------------------------------------------------------
// Estimation
// -----------------------------------------------------------------------------

struct RansacOptions {
    std::uint64_t seed = 42;
    int iterations = 1000;
    double inlier_threshold = 2.0; ///< pixels
};

struct AffineEstimate {
    AffineTransform transform;
    std::vector<std::size_t> inliers;
};

/// Least-squares affine fit over the given pairs. Throws EstimationError when
/// fewer than 3 pairs or the points are collinear.
AffineTransform fit_affine(const CorrespondenceSet& pairs, const std::vector<std::size_t>& subset);

AffineEstimate estimate_affine_ransac(const CorrespondenceSet& pairs, const RansacOptions& opt = {});
AffineTransform estimate_affine(const CorrespondenceSet& pairs, const RansacOptions& opt = {});

// -----------------------------------------------------------------------------
// Resampling
// -----------------------------------------------------------------------------

/// Resamples `test` onto an output grid: out(x,y) = bilinear test sample at
/// T(x,y), 0 outside the test image. Output defaults to test's dimensions.
GrayImage warp_image(const GrayImage& test, const AffineTransform& t, int out_rows = 0, int out_cols = 0);

/// Pixels of the output grid whose sample point T(x,y) falls inside the test image.
BinaryMask warp_coverage(const AffineTransform& t, int test_rows, int test_cols, int out_rows, int out_cols);

/// One-call alignment: corners on `ref`, matching, RANSAC.
struct RegistrationOptions {
    int max_corners = 400;
    CornerOptions corners;
    MatchOptions matching;
    RansacOptions ransac;
};

struct Registration {
    AffineTransform transform;
    CorrespondenceSet pairs;
    std::size_t inliers = 0;
};

Registration register_images(const GrayImage& ref, const GrayImage& test, const RegistrationOptions& opt = {});

} // namespace fabric::registration
