#include "fabric/sylvester.hpp"

#include <cmath>
#include <stdexcept>

namespace fabric::sylvester {

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows < 0 || cols < 0 || data_.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("Matrix: data size must equal rows*cols");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

// Faddeev-LeVerrier:
//   M_1 = I,            c_1 = -tr(A)
//   M_k = A M_{k-1} + c_{k-1} I,  c_k = -tr(A M_k) / k
CharPoly characteristic_polynomial(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("characteristic_polynomial: matrix must be square");
    const int n = a.rows();
    if (n < 1 || n > 16) throw std::invalid_argument("characteristic_polynomial: size must be in [1, 16]");

    CharPoly p;
    p.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
    p.coeffs[0] = 1.0;

    Matrix m = Matrix::identity(n);
    Matrix am(n, n);
    for (int k = 1; k <= n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int t = 0; t < n; ++t) acc += a(i, t) * m(t, j);
                am(i, j) = acc;
            }
        }
        double trace = 0.0;
        for (int i = 0; i < n; ++i) trace += am(i, i);
        const double ck = -trace / k;
        p.coeffs[static_cast<std::size_t>(k)] = ck;
        if (k == n) break;
        m = am;
        for (int i = 0; i < n; ++i) m(i, i) += ck;
    }
    return p;
}

CharPoly normalize(CharPoly p) {
    double norm = 0.0;
    for (double c : p.coeffs) norm += c * c;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& c : p.coeffs) c /= norm;
    }
    p.normalized = true;
    return p;
}

} // namespace fabric::sylvester
