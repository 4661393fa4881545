// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "fabric/codec.hpp"
#include "fabric/edge.hpp"
#include "fabric/enhance.hpp"
#include "fabric/eval.hpp"
#include "fabric/pipeline.hpp"
#include "fabric/registration.hpp"
#include "fabric/subtract.hpp"
#include "fabric/sylvester.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace fabric;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
    bool warning = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

using IntMatrix = std::vector<std::vector<int>>;

sylvester::Matrix to_matrix(const IntMatrix& m) {
    const int n = static_cast<int>(m.size());
    sylvester::Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m[i][j];
    return out;
}

GrayImage random_levels_image(std::mt19937_64& rng, int rows, int cols) {
    const int centers = 1 + static_cast<int>(rng() % 4);
    std::vector<int> mu(centers), sd(centers);
    for (int k = 0; k < centers; ++k) {
        mu[k] = static_cast<int>(rng() % 256);
        sd[k] = 2 + static_cast<int>(rng() % 40);
    }
    std::vector<double> v(static_cast<std::size_t>(rows) * cols);
    for (double& x : v) {
        const int k = static_cast<int>(rng() % centers);
        std::normal_distribution<double> g(mu[k], sd[k]);
        x = std::clamp(static_cast<int>(std::lround(g(rng))), 0, 255) / 255.0;
    }
    return GrayImage(rows, cols, std::move(v));
}

GrayImage uniform_levels_image(std::mt19937_64& rng, int rows, int cols) {
    std::vector<double> v(static_cast<std::size_t>(rows) * cols);
    for (double& x : v) x = static_cast<double>(rng() % 256) / 255.0;
    return GrayImage(rows, cols, std::move(v));
}

// -----------------------------------------------------------------------------

Outcome filter_oracle() {
    const auto t0 = Clock::now();
    const int n = 64, d = 3;
    const double wc = 0.9;
    const auto f = edge::ZeroPhaseHighPass::design(d, wc, n);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst_rms = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(n, 0.0);
        for (int i = 24; i <= 40; ++i) x[i] = g(rng);
        const auto y = f.apply(x);
        const auto want = oracle::spectral_filter(x, [&](double w) { return oracle::highpass_response(w, d, wc); });
        double s = 0.0;
        for (int i = 16; i < 48; ++i) s += (y[i] - want[i]) * (y[i] - want[i]);
        worst_rms = std::max(worst_rms, std::sqrt(s / 32));
    }
    double dc = 0.0;
    for (double v : f.apply(std::vector<double>(n, 0.73))) dc = std::max(dc, std::fabs(v));
    const double half = std::fabs(f.response(wc) - 0.5);
    const double secs = seconds_since(t0);
    return {worst_rms <= 1e-6 && dc <= 1e-9 && half <= 1e-9 && secs < 1.0,
            fmt("interior RMS %.2e, DC %.2e, |H(wc)-0.5| %.2e, %.3f s", worst_rms, dc, half, secs)};
}

Outcome sylvester_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    int agree = 0, total = 0;
    std::array<int, 7> by_gcd{};
    for (int trial = 0; trial < 240; ++trial) {
        const int n = 3 + trial % 4;
        IntMatrix c(n, std::vector<int>(n)), d(n, std::vector<int>(n));
        for (auto* m : {&c, &d})
            for (auto& row : *m)
                for (int& v : row) v = static_cast<int>(rng() % 9) - 4;
        if (trial % 3 == 1) {
            const int k = 1 + static_cast<int>(rng() % (n - 1));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < k; ++j) {
                    if (i >= k) c[i][j] = d[i][j] = 0;
                    else d[i][j] = c[i][j];
                }
        } else if (trial % 3 == 2) {
            std::vector<int> perm(n);
            for (int i = 0; i < n; ++i) perm[i] = i;
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) d[i][j] = c[perm[i]][perm[j]];
        }
        const int want = oracle::sylvester_rank(c, d);
        const int got = sylvester::tile_rank(to_matrix(c), to_matrix(d), 1e-8);
        ++total;
        agree += got == want;
        ++by_gcd[std::clamp(2 * n - want, 0, 6)];
    }
    const double secs = seconds_since(t0);
    return {agree == total && secs < 30.0,
            fmt("%d/%d tiles agree (gcd degree 0:%d 1..5:%d 6:%d), %.2f s", agree, total, by_gcd[0],
                by_gcd[1] + by_gcd[2] + by_gcd[3] + by_gcd[4] + by_gcd[5], by_gcd[6], secs)};
}

Outcome charpoly_oracle() {
    const auto t0 = Clock::now();
    int exact = 0, total = 0;
    for (int code = 0; code < 19683; ++code) {
        IntMatrix m(3, std::vector<int>(3));
        int k = code;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                m[i][j] = k % 3 - 1;
                k /= 3;
            }
        const auto got = sylvester::characteristic_polynomial(to_matrix(m)).coeffs;
        const auto want = oracle::charpoly_cofactor(oracle::to_rational(m)).leading_first(3);
        ++total;
        exact += got == want;
    }
    const double secs = seconds_since(t0);
    return {exact == total && secs < 30.0, fmt("%d/%d matrices exact, %.2f s", exact, total, secs)};
}

Outcome hysteresis_oracle() {
    std::mt19937_64 rng(4);
    int equal = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const double p_weak = 0.2 + 0.4 * (trial % 5) / 4.0;
        const auto labels = oracle::random_labels(rng, 32, 32, p_weak, 0.01 + 0.02 * (trial % 3));
        const BinaryMask got = subtract::hysteresis(labels);
        const auto want = oracle::hysteresis_bfs(labels);
        equal += std::equal(got.bits().begin(), got.bits().end(), want.begin(), want.end());
    }
    return {equal == 500, fmt("%d/500 maps equal", equal)};
}

Outcome specification_bounds() {
    std::mt19937_64 rng(5);
    int within = 0;
    double worst_slack = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const GrayImage test = uniform_levels_image(rng, 64, 64), ref = uniform_levels_image(rng, 64, 64);
        const Histogram rh = histogram(ref);
        const Histogram oh = histogram(enhance::histogram_specification(test, rh));
        double max_bin = 0.0;
        for (auto c : rh.counts) max_bin = std::max(max_bin, static_cast<double>(c) / rh.total);
        const double bound = max_bin + 1.0 / 256;
        std::uint64_t co = 0, cr = 0;
        bool ok = true;
        for (int l = 0; l < 256; ++l) {
            co += oh.counts[l];
            cr += rh.counts[l];
            const double gap = std::fabs(static_cast<double>(co) / oh.total - static_cast<double>(cr) / rh.total);
            worst_slack = std::min(worst_slack, bound - gap);
            ok = ok && gap <= bound + 1e-12;
        }
        within += ok;
    }
    int identity = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage img = random_levels_image(rng, 64, 64);
        identity += enhance::histogram_specification(img, histogram(img)) == img;
    }
    return {within == 100 && identity == 20,
            fmt("%d/100 within bound (min slack %.4f), identity %d/20", within, worst_slack, identity)};
}

Outcome mmsiche_preservation() {
    std::mt19937_64 rng(6);
    int median_ok = 0, closed = 0, tested = 0;
    while (tested < 100) {
        const GrayImage img = random_levels_image(rng, 64, 64);
        const Histogram h = histogram(img);
        int occupied = 0;
        for (auto c : h.counts) occupied += c > 0;
        if (occupied < 4) continue;
        ++tested;
        const auto split = enhance::median_split(h);
        const auto map = enhance::mmsiche_map(h);
        const auto parts = enhance::partition(split, enhance::clip_histogram(h));
        bool in_range = true;
        for (const auto& r : parts.ranges)
            for (int l = r.first; l <= r.last; ++l) in_range = in_range && r.contains(map[l]);
        closed += in_range;
        const auto out = enhance::median_split(histogram(enhance::mmsiche(img)));
        median_ok += std::abs(out.median - split.median) <= 1;
    }
    return {median_ok == 100 && closed == 100, fmt("median within 1: %d/100, sub-ranges closed: %d/100", median_ok, closed)};
}

Outcome registration_recovery() {
    using namespace registration;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.3);
    int recovered = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double angle = (2 * u(rng) - 1) * 10.0 * std::numbers::pi / 180.0;
        const double sx = 0.9 + 0.2 * u(rng), sy = 0.9 + 0.2 * u(rng);
        AffineTransform truth;
        truth.a11 = sx * std::cos(angle);
        truth.a12 = -sy * std::sin(angle);
        truth.a21 = sx * std::sin(angle);
        truth.a22 = sy * std::cos(angle);
        truth.tx = (2 * u(rng) - 1) * 20.0;
        truth.ty = (2 * u(rng) - 1) * 20.0;

        CorrespondenceSet pairs;
        for (int i = 0; i < 200; ++i) {
            const Point p{1024 * u(rng), 1024 * u(rng)};
            Point q = truth.apply(p);
            if (i % 10 < 3) {
                q = {1024 * u(rng), 1024 * u(rng)};
            } else {
                q.x += noise(rng);
                q.y += noise(rng);
            }
            pairs.push_back({p, q, 1.0});
        }
        std::shuffle(pairs.begin(), pairs.end(), rng);

        double err = 1e9;
        try {
            const AffineTransform est = estimate_affine(pairs);
            err = 0.0;
            int n = 0;
            for (int y = 0; y <= 1024; y += 64)
                for (int x = 0; x <= 1024; x += 64) {
                    const Point a = est.apply({double(x), double(y)}), b = truth.apply({double(x), double(y)});
                    err += std::hypot(a.x - b.x, a.y - b.y);
                    ++n;
                }
            err /= n;
        } catch (const EstimationError&) {
        }
        worst = std::max(worst, err);
        recovered += err <= 0.5;
    }
    return {recovered >= 48, fmt("%d/50 within 0.5 px (worst mean error %.3f px)", recovered, worst)};
}

struct ExperimentStats {
    int tp = 0, fn = 0, fp = 0, tn = 0;
    double gamma_sum = 0.0;
    std::size_t truth_area = 0, covered_area = 0;
    double min_coverage = 1.0;
};

Outcome end_to_end() {
    const pipeline::PipelineConfig cfg;
    const eval::DefectKind kinds[] = {eval::DefectKind::LineBreak, eval::DefectKind::Spot, eval::DefectKind::Tear,
                                      eval::DefectKind::IlluminationSpot};
    ExperimentStats s;
    for (int i = 0; i < 40; ++i) {
        const bool defective = i < 20;
        const std::uint64_t seed = 1000 + i;
        const auto spec =
            defective ? eval::random_defect(kinds[i % 4], seed) : eval::DefectSpec{};
        const auto pair = eval::generate_synthetic_pair(seed, spec);
        const auto r = pipeline::inspect_pair(pair.reference, pair.test, cfg, pair.truth);
        if (defective) {
            r.detected ? ++s.tp : ++s.fn;
            s.gamma_sum += *r.gamma;
            const std::size_t area = pair.truth.count();
            s.truth_area += area;
            s.covered_area += static_cast<std::size_t>(std::lround(*r.coverage * area));
            s.min_coverage = std::min(s.min_coverage, *r.coverage);
        } else {
            r.detected ? ++s.fp : ++s.tn;
        }
    }
    const double recall = static_cast<double>(s.tp) / 20;
    const double fp_rate = static_cast<double>(s.fp) / 20;
    const double mean_gamma = s.gamma_sum / 20;
    const double overlap = static_cast<double>(s.covered_area) / static_cast<double>(s.truth_area);
    return {recall == 1.0 && fp_rate <= 0.05 && mean_gamma >= 0.90 && overlap >= 0.70,
            fmt("recall %.3f, FP rate %.3f, mean gamma %.4f, truth overlap %.3f (min per pair %.3f)", recall, fp_rate,
                mean_gamma, overlap, s.min_coverage)};
}

Outcome performance() {
    const fs::path dir = fs::temp_directory_path() / "fabric_acceptance_perf";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto spec = eval::random_defect(eval::DefectKind::Spot, 77);
    const auto pair = eval::generate_synthetic_pair(77, spec);
    save_gray(dir / "reference.png", pair.reference);
    save_gray(dir / "test.png", pair.test);

    pipeline::PipelineConfig cfg;
    cfg.workers = 1;
    const auto r = pipeline::run_pair(dir / "reference.png", dir / "test.png", cfg);
    fs::remove_all(dir);

    long long total = 0;
    std::ostringstream stages;
    for (const auto& [name, ms] : r.timings_ms) {
        if (name == "total") total = ms;
        else stages << ' ' << name << '=' << ms;
    }
    Outcome o{total <= 5000, fmt("total %lld ms;%s", total, stages.str().c_str())};
    o.warning = total > 2500 && total <= 5000;
    return o;
}

Outcome gamma_fidelity() {
    BinaryMask a(4, 4);
    a.set(1, 2);
    a.set(3, 0);
    BinaryMask b = a;
    b.set(2, 2);
    BinaryMask half(4, 4);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 4; ++c) half.set(r, c);
    const double same = eval::binary_similarity(a, a);
    const double zero = eval::binary_similarity(half, BinaryMask(4, 4));
    const double one_px = eval::binary_similarity(a, b);
    return {same == 1.0 && zero == 0.0 && one_px == 0.875,
            fmt("gamma(a,a)=%g, half-differing=%g, one-pixel 4x4=%g", same, zero, one_px)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"filter oracle", filter_oracle},
        {"Sylvester rank oracle", sylvester_oracle},
        {"characteristic polynomial oracle", charpoly_oracle},
        {"hysteresis oracle", hysteresis_oracle},
        {"histogram specification", specification_bounds},
        {"MMSICHE brightness preservation", mmsiche_preservation},
        {"registration recovery", registration_recovery},
        {"end-to-end synthetic experiment", end_to_end},
        {"single-pair performance", performance},
        {"binary similarity fidelity", gamma_fidelity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? (o.warning ? "[PASS with warning]" : "[PASS]") : "[FAIL]") << " criterion " << i + 1
                  << ": " << criteria[i].first << " -- " << o.detail << std::endl;
    }
    std::cout << (failures ? "acceptance: FAILED " : "acceptance: all criteria passed") ;
    if (failures) std::cout << failures << " criteria";
    std::cout << std::endl;
    return failures ? 1 : 0;
}
