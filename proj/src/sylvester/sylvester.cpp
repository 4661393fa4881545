#include "fabric/sylvester.hpp"

#include <stdexcept>

namespace fabric::sylvester {

// Column j (0 <= j < n) holds the shifted coefficients of P starting at row j;
// column n + j holds those of Q.
SylvesterMatrix build_sylvester(const CharPoly& pc, const CharPoly& pd) {
    if (pc.degree() != pd.degree()) throw std::invalid_argument("build_sylvester: degree mismatch");
    if (!pc.normalized || !pd.normalized) {
        throw std::invalid_argument("build_sylvester: coefficient vectors must be normalized");
    }
    const int n = pc.degree();
    if (n < 1) throw std::invalid_argument("build_sylvester: degree must be >= 1");

    SylvesterMatrix out{n, Matrix(2 * n, 2 * n)};
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k <= n; ++k) {
            out.s(j + k, j) = pc.coeffs[static_cast<std::size_t>(k)];
            out.s(j + k, n + j) = pd.coeffs[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

} // namespace fabric::sylvester
