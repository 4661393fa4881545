#include "fabric/sylvester.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace fabric::sylvester {

std::vector<int> tile_origins(int extent, int tile, int stride) {
    if (tile < 1 || stride < 1) throw std::invalid_argument("tile_origins: tile and stride must be >= 1");
    if (tile > extent) throw std::invalid_argument("tile_origins: tile larger than the image");
    std::vector<int> o;
    for (int p = 0; p + tile <= extent; p += stride) o.push_back(p);
    if (o.back() + tile < extent) o.push_back(extent - tile);
    return o;
}

namespace {

TileResult evaluate_tile(const edge::EdgeImage& ref, const edge::EdgeImage& test, int r0, int c0, int w,
                         double tol) {
    TileResult t;
    t.row = r0;
    t.col = c0;
    Matrix c(w, w), d(w, w);
    bool identical = true;
    for (int r = 0; r < w; ++r) {
        for (int k = 0; k < w; ++k) {
            c(r, k) = ref(r0 + r, c0 + k);
            d(r, k) = test(r0 + r, c0 + k);
            identical = identical && c(r, k) == d(r, k);
        }
    }
    // Equal tiles (all-zero ones included) share every eigenvalue: rank is exactly w.
    t.rank = identical ? w : tile_rank(c, d, tol);
    t.intensity = intensity_from_rank(t.rank, w);
    return t;
}

} // namespace

DefectMap fault_map(const edge::EdgeImage& ref, const edge::EdgeImage& test, const FaultMapOptions& opt) {
    if (ref.rows != test.rows || ref.cols != test.cols) {
        throw std::invalid_argument("fault_map: edge images differ in size");
    }
    const int w = opt.tile;
    if (w < 1 || w > 16) throw std::invalid_argument("fault_map: tile size must lie in [1, 16]");
    const int s = opt.stride == 0 ? w : opt.stride;
    if (s < 1) throw std::invalid_argument("fault_map: stride must be >= 1");

    DefectMap map;
    map.rows = ref.rows;
    map.cols = ref.cols;
    map.tile = w;
    map.stride = s;
    const std::vector<int> ro = tile_origins(ref.rows, w, s);
    const std::vector<int> co = tile_origins(ref.cols, w, s);
    map.grid_rows = static_cast<int>(ro.size());
    map.grid_cols = static_cast<int>(co.size());
    map.tiles.resize(ro.size() * co.size());

    auto work = [&](int first, int step) {
        for (int gr = first; gr < map.grid_rows; gr += step) {
            for (int gc = 0; gc < map.grid_cols; ++gc) {
                TileResult t = evaluate_tile(ref, test, ro[static_cast<std::size_t>(gr)],
                                             co[static_cast<std::size_t>(gc)], w, opt.tolerance);
                t.tile_row = gr;
                t.tile_col = gc;
                map.tiles[static_cast<std::size_t>(gr) * map.grid_cols + gc] = t;
            }
        }
    };
    const int workers = std::clamp(opt.workers, 1, map.grid_rows);
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work, i, workers);
    }

    map.pixel_intensity.assign(static_cast<std::size_t>(map.rows) * map.cols, 0.0);
    for (const TileResult& t : map.tiles) {
        if (t.intensity == 0.0) continue;
        for (int r = t.row; r < t.row + w; ++r)
            for (int c = t.col; c < t.col + w; ++c) {
                double& v = map.pixel_intensity[static_cast<std::size_t>(r) * map.cols + c];
                v = std::max(v, t.intensity);
            }
    }
    return map;
}

BinaryMask DefectMap::mask(double theta) const {
    BinaryMask m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (pixel_intensity[static_cast<std::size_t>(r) * cols + c] >= theta) m.set(r, c, true);
    return m;
}

GrayImage DefectMap::intensity_image() const { return GrayImage(rows, cols, pixel_intensity); }

void write_tiles_csv(std::ostream& out, const DefectMap& map) {
    out << "tile_row,tile_col,rank,intensity\n";
    const auto old = out.precision(6);
    for (const TileResult& t : map.tiles) {
        out << t.tile_row << ',' << t.tile_col << ',' << t.rank << ',' << std::fixed << t.intensity
            << std::defaultfloat << '\n';
    }
    out.precision(old);
}

} // namespace fabric::sylvester
