/**
 * @file banded.hpp
 * @brief Banded matrices stored by diagonal offsets, and a banded LU solver.
 */
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fabric::edge {

/// rows x cols matrix whose non-zeros lie on diagonals -lower .. +upper.
class BandedMatrix {
public:
    BandedMatrix(int rows, int cols, int lower, int upper);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int lower() const noexcept { return lower_; }
    int upper() const noexcept { return upper_; }

    bool in_band(int i, int j) const noexcept {
        return i >= 0 && j >= 0 && i < rows_ && j < cols_ && j - i >= -lower_ && j - i <= upper_;
    }
    /// Zero outside the band.
    double get(int i, int j) const noexcept;
    /// Throws std::out_of_range outside the band.
    void set(int i, int j, double v);

    /// Fills the band with a Toeplitz stencil: entry (i, i+k) = taps[k + offset].
    static BandedMatrix toeplitz(int rows, int cols, std::span<const double> taps, int offset);

    std::vector<double> multiply(std::span<const double> x) const;
    std::vector<double> to_dense() const;

private:
    int rows_, cols_, lower_, upper_;
    std::vector<double> diag_; ///< rows * (lower + upper + 1), row-major by (i, j - i + lower)
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// LU factorization of a square banded matrix. Elimination runs without row
/// exchanges unless a pivot falls below `pivot_floor` (relative to the largest
/// entry), in which case it restarts with partial pivoting.
class BandedLU {
public:
    enum class Pivoting { Never, Always, Auto };

    explicit BandedLU(const BandedMatrix& a, Pivoting mode = Pivoting::Auto, double pivot_floor = 1e-12);

    int size() const noexcept { return n_; }
    int lower() const noexcept { return kl_; }
    /// Upper bandwidth of U (grows to lower+upper when pivoting).
    int upper() const noexcept { return ku_; }
    bool pivoted() const noexcept { return pivoted_; }

    /// Solves A x = b in place.
    void solve(std::span<double> b) const;

    /// Multiplier L(i, j) for i > j (zero outside the band).
    double l(int i, int j) const noexcept;
    /// U(i, j) for j >= i.
    double u(int i, int j) const noexcept;

private:
    bool factor(const BandedMatrix& a, bool pivot, double floor);

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int width_ = 0;                 ///< row window [i - kl, i + kl + ku_orig]
    bool pivoted_ = false;
    std::vector<double> rows_;      ///< working rows (U lives at columns >= i)
    std::vector<double> mult_;      ///< n * kl elimination multipliers
    std::vector<int> perm_;         ///< row exchanged with step k
};

} // namespace fabric::edge
