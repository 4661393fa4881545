#include "fabric/subtract.hpp"
#include "fabric/simd/kernels.hpp"

#include <numeric>
#include <stdexcept>

namespace fabric::subtract {

ThresholdPair::ThresholdPair(double low, double high) : low_(low), high_(high) {
    if (!(low >= 0.0 && low < high && high <= 1.0)) {
        throw std::invalid_argument("ThresholdPair: require 0 <= low < high <= 1");
    }
}

DiffMap absolute_difference(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("absolute_difference: dimension mismatch");
    DiffMap d{a.rows(), a.cols(), std::vector<double>(a.size())};
    simd::kernels().abs_diff(a.pixels().data(), b.pixels().data(), d.values.data(), a.size());
    return d;
}

LabelMap double_threshold(const DiffMap& d, const ThresholdPair& t) {
    LabelMap m{d.rows, d.cols, std::vector<Label>(d.values.size())};
    static_assert(sizeof(Label) == sizeof(std::uint8_t));
    simd::kernels().classify(d.values.data(), d.values.size(), t.low(), t.high(),
                             reinterpret_cast<std::uint8_t*>(m.labels.data()));
    return m;
}

namespace {

struct DisjointSet {
    std::vector<std::uint32_t> parent;

    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;
        else parent[a] = b;
    }
};

} // namespace

// Connected components over non-None pixels; a component survives iff it holds
// a Strong pixel. The result is unique regardless of scan order.
BinaryMask hysteresis(const LabelMap& labels) {
    const int rows = labels.rows, cols = labels.cols;
    BinaryMask mask(rows, cols);
    const std::size_t n = labels.labels.size();
    DisjointSet ds(n);
    auto idx = [cols](int r, int c) { return static_cast<std::uint32_t>(static_cast<std::size_t>(r) * cols + c); };

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (labels(r, c) == Label::None) continue;
            // Half of the 8-neighbourhood already visited: W, NW, N, NE.
            static constexpr int kNbr[4][2] = {{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
            for (const auto& o : kNbr) {
                const int rr = r + o[0], cc = c + o[1];
                if (rr < 0 || cc < 0 || cc >= cols) continue;
                if (labels(rr, cc) != Label::None) ds.unite(idx(r, c), idx(rr, cc));
            }
        }
    }
    std::vector<std::uint8_t> root_strong(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels.labels[i] == Label::Strong) root_strong[ds.find(static_cast<std::uint32_t>(i))] = 1;
    }
    auto bits = mask.bits();
    for (std::size_t i = 0; i < n; ++i) {
        if (labels.labels[i] != Label::None && root_strong[ds.find(static_cast<std::uint32_t>(i))]) bits[i] = 1;
    }
    return mask;
}

LabelMap promote(const LabelMap& labels) {
    const BinaryMask m = hysteresis(labels);
    LabelMap out{labels.rows, labels.cols, std::vector<Label>(labels.labels.size(), Label::None)};
    const auto bits = m.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out.labels[i] = Label::Strong;
    }
    return out;
}

bool defect_present(const BinaryMask& mask, std::size_t min_defect_pixels) {
    return mask.count() >= std::max<std::size_t>(min_defect_pixels, 1);
}

} // namespace fabric::subtract
