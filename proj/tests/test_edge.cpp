#include "fabric/banded.hpp"
#include "fabric/edge.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <stdexcept>

using namespace fabric;
using namespace fabric::edge;

namespace {

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b, int n) {
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i * n + k]) > std::fabs(a[p * n + k])) p = i;
        for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
        std::swap(b[k], b[p]);
        for (int i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] / a[k * n + k];
            for (int j = k; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= a[i * n + j] * x[j];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

std::vector<double> random_signal(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);
    return x;
}

double rms(const std::vector<double>& a, const std::vector<double>& b, int first, int last) {
    double s = 0.0;
    for (int i = first; i < last; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / (last - first));
}

} // namespace

TEST_CASE("banded storage") {
    const std::vector<double> taps = {1.0, -2.0, 5.0, -2.0, 1.0};
    const BandedMatrix m = BandedMatrix::toeplitz(6, 6, taps, 2);
    CHECK(m.lower() == 2);
    CHECK(m.upper() == 2);
    CHECK(m.get(3, 3) == 5.0);
    CHECK(m.get(3, 1) == 1.0);
    CHECK(m.get(3, 0) == 0.0);
    CHECK_THROWS_AS(BandedMatrix(6, 6, 1, 1).set(0, 3, 1.0), std::out_of_range);

    const BandedMatrix rect = BandedMatrix::toeplitz(4, 6, std::vector<double>{1, 2, 3}, 0);
    const auto dense = rect.to_dense();
    CHECK(dense[0 * 6 + 0] == 1.0);
    CHECK(dense[0 * 6 + 2] == 3.0);
    CHECK(dense[3 * 6 + 5] == 3.0);
    const std::vector<double> x = {1, 1, 1, 1, 1, 1};
    for (double v : rect.multiply(x)) CHECK(v == 6.0);
}

TEST_CASE("banded LU agrees with a dense solve") {
    std::mt19937_64 rng(3);
    for (int n : {8, 33, 128}) {
        BandedMatrix a(n, n, 2, 3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 3); ++j) a.set(i, j, u(rng) + (i == j ? 6 : 0));
        auto b = random_signal(rng, n);
        const auto want = dense_solve(a.to_dense(), b, n);
        for (auto mode : {BandedLU::Pivoting::Never, BandedLU::Pivoting::Always, BandedLU::Pivoting::Auto}) {
            auto x = b;
            BandedLU(a, mode).solve(x);
            CHECK(rms(x, want, 0, n) <= 1e-12);
        }
    }

    // A zero leading pivot needs row exchanges.
    BandedMatrix p(3, 3, 1, 1);
    p.set(0, 1, 1.0);
    p.set(1, 0, 1.0);
    p.set(1, 2, 1.0);
    p.set(2, 1, 1.0);
    p.set(2, 2, 1.0);
    CHECK_THROWS_AS(BandedLU(p, BandedLU::Pivoting::Never), NumericError);
    const BandedLU lu(p);
    CHECK(lu.pivoted());
    std::vector<double> rhs = {2.0, 4.0, 5.0}; // x = (1, 2, 3)
    lu.solve(rhs);
    CHECK(rhs[0] == doctest::Approx(1.0));
    CHECK(rhs[1] == doctest::Approx(2.0));
    CHECK(rhs[2] == doctest::Approx(3.0));

    CHECK_THROWS_AS(BandedLU(BandedMatrix(3, 3, 1, 1)), NumericError);
}

TEST_CASE("filter design") {
    CHECK(ZeroPhaseHighPass::design(3, 0.9, 64).alpha() == doctest::Approx(0.012705151395827965).epsilon(1e-14));
    CHECK(ZeroPhaseHighPass::design(1, std::numbers::pi / 2, 64).alpha() == doctest::Approx(1.0).epsilon(1e-15));

    for (int d : {1, 2, 3, 4}) {
        for (double wc : {0.3, 0.9, 1.7, 2.8}) {
            const auto f = ZeroPhaseHighPass::design(d, wc, 64);
            CHECK(std::fabs(f.response(wc) - 0.5) <= 1e-9);
            CHECK(f.response(0.0) == 0.0);
            CHECK(f.response(std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(f.response(0.4) == doctest::Approx(oracle::highpass_response(0.4, d, wc)).epsilon(1e-12));
        }
    }

    const auto f = ZeroPhaseHighPass::design(3, 0.9, 64);
    const std::vector<double> num = {-1, 6, -15, 20, -15, 6, -1};
    CHECK(std::equal(num.begin(), num.end(), f.numerator().begin()));
    CHECK(f.a().rows() == 64);
    CHECK(f.b().cols() == 70);
    CHECK(f.a().lower() == 3);
    CHECK(f.a().upper() == 3);
    CHECK_FALSE(f.factors().pivoted());

    CHECK_THROWS_AS(ZeroPhaseHighPass::design(0, 0.9, 64), std::invalid_argument);
    CHECK_THROWS_AS(ZeroPhaseHighPass::design(3, 0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(ZeroPhaseHighPass::design(3, std::numbers::pi, 64), std::invalid_argument);
    CHECK_THROWS_AS(ZeroPhaseHighPass::design(3, 0.9, 6), std::invalid_argument);
    CHECK_THROWS_AS(f.apply(std::vector<double>(65, 0.0)), std::invalid_argument);
}

TEST_CASE("filtering matches the frequency-domain response") {
    const auto f = ZeroPhaseHighPass::design(3, 0.9, 64);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(64, 0.0);
        const auto burst = random_signal(rng, 17);
        std::copy(burst.begin(), burst.end(), x.begin() + 24);
        const auto y = f.apply(x);
        const auto want = oracle::spectral_filter(x, [](double w) { return oracle::highpass_response(w, 3, 0.9); });
        CHECK(rms(y, want, 16, 48) <= 1e-6);
    }
}

TEST_CASE("DC rejection") {
    for (int d : {1, 2, 3}) {
        for (double wc : {0.5, 0.9, 2.0}) {
            const auto f = ZeroPhaseHighPass::design(d, wc, 96);
            for (double level : {1.0, 0.37, -4.0}) {
                for (double v : f.apply(std::vector<double>(96, level))) CHECK(std::fabs(v) <= 1e-9);
            }
        }
    }
}

TEST_CASE("Nyquist passes through") {
    const auto f = ZeroPhaseHighPass::design(3, 0.9, 128);
    std::vector<double> x(128);
    for (int i = 0; i < 128; ++i) x[i] = i % 2 ? -1.0 : 1.0;
    const auto y = f.apply(x);
    // The end transient decays by the dominant pole (|p| ~ 0.66) per sample.
    for (int i = 6; i < 122; ++i) CHECK(std::fabs(y[i] - x[i]) <= 0.1);
    for (int i = 45; i < 83; ++i) CHECK(std::fabs(y[i] - x[i]) <= 1e-8);
}

TEST_CASE("banded application equals the dense system") {
    std::mt19937_64 rng(23);
    for (int n : {16, 64, 128}) {
        const auto f = ZeroPhaseHighPass::design(3, 0.9, n);
        const auto x = random_signal(rng, n);
        std::vector<double> ext(n + 6);
        for (int i = 0; i < n + 6; ++i) ext[i] = x[std::clamp(i - 3, 0, n - 1)];
        const auto want = dense_solve(f.a().to_dense(), f.b().multiply(ext), n);
        CHECK(rms(f.apply(x), want, 0, n) <= 1e-10);
    }
}

TEST_CASE("linearity and zero phase") {
    const auto f = ZeroPhaseHighPass::design(3, 0.9, 100);
    std::mt19937_64 rng(29);
    const auto x = random_signal(rng, 100);
    const auto y = f.apply(x);
    std::vector<double> x3(x);
    for (double& v : x3) v *= -3.0;
    const auto y3 = f.apply(x3);
    for (int i = 0; i < 100; ++i) CHECK(y3[i] == doctest::Approx(-3.0 * y[i]).epsilon(1e-12));

    std::vector<double> sym(100);
    for (int i = 0; i < 50; ++i) sym[i] = sym[99 - i] = x[i];
    const auto ys = f.apply(sym);
    for (int i = 0; i < 50; ++i) CHECK(std::fabs(ys[i] - ys[99 - i]) <= 1e-8);
}

TEST_CASE("edge extraction") {
    const auto f = ZeroPhaseHighPass::design(3, 0.9, 64);
    for (double v : extract_edges(GrayImage(20, 30, 0.4), f).values) CHECK(std::fabs(v) <= 1e-9);

    std::vector<double> step(20 * 30);
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 30; ++c) step[r * 30 + c] = c >= 15 ? 1.0 : 0.0;
    const GrayImage img(20, 30, step);
    const DirectionalEdges d = directional_edges(img, f);
    for (int r = 0; r < 20; ++r) {
        int best = 0;
        for (int c = 1; c < 30; ++c)
            if (std::fabs(d.vertical[r * 30 + c]) > std::fabs(d.vertical[r * 30 + best])) best = c;
        CHECK((best == 14 || best == 15));
    }
    for (double v : d.horizontal) CHECK(std::fabs(v) <= 1e-9);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> px(17 * 23), tr(23 * 17);
    for (int r = 0; r < 17; ++r)
        for (int c = 0; c < 23; ++c) tr[c * 17 + r] = px[r * 23 + c] = u(rng);
    const EdgeImage e = extract_edges(GrayImage(17, 23, px), f);
    const EdgeImage et = extract_edges(GrayImage(23, 17, tr), f);
    for (int r = 0; r < 17; ++r)
        for (int c = 0; c < 23; ++c) CHECK(e(r, c) == doctest::Approx(et(c, r)).epsilon(1e-12));
    for (double v : e.values) CHECK(v >= 0.0);

    CHECK_THROWS_AS(extract_edges(GrayImage(65, 10), f), std::invalid_argument);

    const GrayImage exported = normalized_for_export(e);
    double peak = 0.0;
    for (double v : exported.pixels()) peak = std::max(peak, v);
    CHECK(peak == 1.0);
}

TEST_CASE("filter copies share valid plans") {
    std::vector<double> x(64);
    for (int i = 0; i < 64; ++i) x[i] = std::sin(0.7 * i);
    std::vector<double> y;
    {
        const auto f = ZeroPhaseHighPass::design(3, 0.9, 64);
        auto copy = f;
        y = copy.apply(x);
    }
    const auto g = ZeroPhaseHighPass::design(3, 0.9, 64);
    CHECK(g.apply(x) == y);
}
