#include "fabric/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fabric::eval {

DefectKind parse_defect_kind(const std::string& name) {
    if (name == "none") return DefectKind::None;
    if (name == "line-break") return DefectKind::LineBreak;
    if (name == "spot") return DefectKind::Spot;
    if (name == "tear") return DefectKind::Tear;
    if (name == "illumination-gradient+spot") return DefectKind::IlluminationSpot;
    throw std::invalid_argument("unknown defect kind: " + name);
}

std::string defect_kind_name(DefectKind kind) {
    switch (kind) {
    case DefectKind::None: return "none";
    case DefectKind::LineBreak: return "line-break";
    case DefectKind::Spot: return "spot";
    case DefectKind::Tear: return "tear";
    case DefectKind::IlluminationSpot: return "illumination-gradient+spot";
    }
    return "none";
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Weave texture defined on the continuous plane so that skewed views can be
// rendered exactly.
class Weave {
public:
    explicit Weave(std::uint64_t seed) : seed_(splitmix(seed)) {
        std::mt19937_64 rng(seed_);
        orient_ = uniform(rng, -0.25, 0.25);
        k1_ = 2.0 * std::numbers::pi / uniform(rng, 10.0, 16.0);
        k2_ = 2.0 * std::numbers::pi / uniform(rng, 10.0, 16.0);
        ph1_ = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        ph2_ = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    }

    double operator()(double x, double y) const {
        const double c = std::cos(orient_), s = std::sin(orient_);
        const double u = c * x + s * y, v = -s * x + c * y;
        return 0.5 + kAmp * std::sin(k1_ * u + ph1_) + kAmp * std::sin(k2_ * v + ph2_) + noise(x, y);
    }

private:
    static constexpr double kAmp = 0.18;
    static constexpr double kNoise = 0.06;
    static constexpr double kLattice = 3.0;

    double lattice(long long i, long long j) const {
        const std::uint64_t h = splitmix(seed_ ^ splitmix(static_cast<std::uint64_t>(i) * 0x100000001b3ULL +
                                                          static_cast<std::uint64_t>(j)));
        return (static_cast<double>(h >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    }

    double noise(double x, double y) const {
        const double gx = x / kLattice, gy = y / kLattice;
        const double fx = std::floor(gx), fy = std::floor(gy);
        const auto i = static_cast<long long>(fx), j = static_cast<long long>(fy);
        auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
        const double tx = smooth(gx - fx), ty = smooth(gy - fy);
        const double top = lattice(i, j) * (1.0 - tx) + lattice(i + 1, j) * tx;
        const double bot = lattice(i, j + 1) * (1.0 - tx) + lattice(i + 1, j + 1) * tx;
        return kNoise * (top * (1.0 - ty) + bot * ty);
    }

    std::uint64_t seed_;
    double orient_, k1_, k2_, ph1_, ph2_;
};

// Returns the painted value at a reference-frame point, or a negative number
// when the point is outside the defect.
double defect_value(const DefectSpec& d, double x, double y) {
    const double dx = x - d.center_col, dy = y - d.center_row;
    switch (d.kind) {
    case DefectKind::None:
        return -1.0;
    case DefectKind::Spot:
    case DefectKind::IlluminationSpot:
        return dx * dx + dy * dy <= d.radius * d.radius ? 0.12 : -1.0;
    case DefectKind::LineBreak:
    case DefectKind::Tear: {
        const double along = dx * std::cos(d.angle) + dy * std::sin(d.angle);
        const double across = -dx * std::sin(d.angle) + dy * std::cos(d.angle);
        const bool inside = std::fabs(along) <= d.length / 2.0 && std::fabs(across) <= d.width / 2.0;
        if (!inside) return -1.0;
        return d.kind == DefectKind::Tear ? 0.95 : 0.9;
    }
    }
    return -1.0;
}

} // namespace

DefectSpec random_defect(DefectKind kind, std::uint64_t seed, int rows, int cols) {
    std::mt19937_64 rng(splitmix(seed ^ 0xdefec7ULL));
    DefectSpec d;
    d.kind = kind;
    const double margin = std::min({100.0, rows / 4.0, cols / 4.0});
    d.center_row = std::round(uniform(rng, margin, rows - margin));
    d.center_col = std::round(uniform(rng, margin, cols - margin));
    d.radius = uniform(rng, 5.0, 10.0);
    d.angle = uniform(rng, 0.0, std::numbers::pi);
    if (kind == DefectKind::Tear) {
        d.length = uniform(rng, 40.0, 70.0);
        d.width = uniform(rng, 4.0, 7.0);
    } else {
        d.length = uniform(rng, 40.0, 80.0);
        d.width = 2.0;
    }
    return d;
}

BinaryMask defect_footprint(const DefectSpec& spec, int rows, int cols) {
    BinaryMask m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (defect_value(spec, c, r) >= 0.0) m.set(r, c);
    return m;
}

SyntheticPair generate_synthetic_pair(std::uint64_t seed, const DefectSpec& spec, const SynthOptions& opt) {
    if (opt.rows < 16 || opt.cols < 16) throw std::invalid_argument("generate_synthetic_pair: image too small");
    const int rows = opt.rows, cols = opt.cols;
    const Weave weave(seed);

    std::mt19937_64 rng(splitmix(seed ^ 0x5eedULL));
    const double angle = opt.skew ? uniform(rng, -0.6, 0.6) * std::numbers::pi / 180.0 : 0.0;
    const double shift_x = opt.skew ? uniform(rng, -4.0, 4.0) : 0.0;
    const double shift_y = opt.skew ? uniform(rng, -4.0, 4.0) : 0.0;
    const double ramp_limit = spec.kind == DefectKind::IlluminationSpot ? 0.08 : 0.05;
    const double ramp_x = opt.illumination ? uniform(rng, -ramp_limit, ramp_limit) : 0.0;
    const double ramp_y = opt.illumination ? uniform(rng, -ramp_limit, ramp_limit) : 0.0;
    const double gain = opt.illumination ? uniform(rng, 0.92, 1.08) : 1.0;
    const double offset = opt.illumination ? uniform(rng, -0.03, 0.03) : 0.0;

    std::vector<double> ref(static_cast<std::size_t>(rows) * cols), test(ref.size());
    const double cx = (cols - 1) / 2.0, cy = (rows - 1) / 2.0;
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            ref[i] = std::clamp(weave(c, r), 0.0, 1.0);

            // Test pixel (c, r) views reference point q = R (p - center) + center + shift.
            const double px = c - cx, py = r - cy;
            const double qx = ca * px - sa * py + cx + shift_x;
            const double qy = sa * px + ca * py + cy + shift_y;
            const double d = defect_value(spec, qx, qy);
            const double base = d >= 0.0 ? d : std::clamp(weave(qx, qy), 0.0, 1.0);
            const double light = gain * (1.0 + ramp_x * px / cols + ramp_y * py / rows);
            test[i] = std::clamp(light * base + offset, 0.0, 1.0);
        }
    }
    return {GrayImage(rows, cols, std::move(ref)), GrayImage(rows, cols, std::move(test)),
            dilate(defect_footprint(spec, rows, cols))};
}

} // namespace fabric::eval
