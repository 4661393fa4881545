/**
 * @file sylvester.hpp
 * @brief Tile similarity from the numerical rank of the Sylvester matrix of two
 *        tiles' characteristic polynomials.
 *
 * For degree-n polynomials P and Q the 2n x 2n Sylvester matrix has nullity
 * deg gcd(P, Q). Identical tiles therefore give rank n and tiles with no
 * eigenvalue in common give rank 2n; a tile's defect intensity is
 * clamp((rank - n) / n, 0, 1).
 */
#pragma once

#include "fabric/edge.hpp"
#include "fabric/image.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace fabric::sylvester {

/// Small dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}
    Matrix(int rows, int cols, std::vector<double> data);

    static Matrix identity(int n);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    double& operator()(int r, int c) noexcept { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const noexcept { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Polynomial coefficients, leading first: sum_i coeffs[i] * lambda^(n-i).
struct CharPoly {
    std::vector<double> coeffs;
    bool normalized = false;

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

/// det(lambda I - M) by the Faddeev-LeVerrier recurrence; monic.
/// Throws std::invalid_argument for non-square input or n outside [1, 16].
CharPoly characteristic_polynomial(const Matrix& m);

/// Scales the coefficient vector to unit Euclidean norm. A zero vector is
/// returned unchanged.
CharPoly normalize(CharPoly p);

struct SylvesterMatrix {
    int degree = 0; ///< n
    Matrix s;       ///< [E(P) | F(Q)], 2n x 2n
};

/// Throws std::invalid_argument on a degree mismatch or non-normalized input.
SylvesterMatrix build_sylvester(const CharPoly& pc, const CharPoly& pd);

/// Singular values (descending) by one-sided Jacobi rotations.
std::vector<double> singular_values(const Matrix& m);

constexpr double kDefaultRankTolerance = 1e-8;

/// Number of singular values above tol * sigma_max; 0 for a zero matrix.
/// Throws std::invalid_argument unless 0 < tol < 1.
int numerical_rank(const Matrix& m, double tol = kDefaultRankTolerance);

double intensity_from_rank(int rank, int n) noexcept;

/// Rank of the Sylvester matrix of two equal-size square tiles. Both tiles are
/// scaled by one common power of two, bringing the largest entry into [1, 2),
/// before their characteristic polynomials are formed (the exact rank is unaffected).
int tile_rank(const Matrix& c, const Matrix& d, double tol = kDefaultRankTolerance);

// -----------------------------------------------------------------------------
// Fault map
// -----------------------------------------------------------------------------

struct FaultMapOptions {
    int tile = 8;      ///< w
    int stride = 0;    ///< s; 0 means s = w
    double tolerance = kDefaultRankTolerance;
    int workers = 1;
};

struct TileResult {
    int tile_row = 0; ///< grid index
    int tile_col = 0;
    int row = 0;      ///< top-left pixel
    int col = 0;
    int rank = 0;
    double intensity = 0.0;
};

struct DefectMap {
    int rows = 0;
    int cols = 0;
    int tile = 0;
    int stride = 0;
    int grid_rows = 0;
    int grid_cols = 0;
    std::vector<TileResult> tiles;       ///< row-major over the grid
    std::vector<double> pixel_intensity; ///< max over covering tiles

    /// Pixels whose intensity is at least theta.
    BinaryMask mask(double theta) const;
    GrayImage intensity_image() const;
};

/// Tile origins along one axis: 0, s, 2s, ... plus a final tile flush with the end.
std::vector<int> tile_origins(int extent, int tile, int stride);

/// Throws std::invalid_argument on mismatched dimensions or a tile larger than the image.
DefectMap fault_map(const edge::EdgeImage& ref_edges, const edge::EdgeImage& test_edges,
                    const FaultMapOptions& opt = {});

/// "tile_row,tile_col,rank,intensity" lines with a header.
void write_tiles_csv(std::ostream& out, const DefectMap& map);

} // namespace fabric::sylvester
