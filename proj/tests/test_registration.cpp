#include "fabric/registration.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace fabric;
using namespace fabric::registration;

namespace {

double smooth_texture(double x, double y) {
    return 0.5 + 0.2 * std::sin(0.45 * x + 0.3 * y) + 0.15 * std::cos(0.2 * x - 0.55 * y) +
           0.1 * std::sin(0.05 * x * y / 8.0);
}

GrayImage render(int rows, int cols, double shift_x = 0.0, double shift_y = 0.0) {
    std::vector<double> v(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            v[static_cast<std::size_t>(r) * cols + c] = std::clamp(smooth_texture(c + shift_x, r + shift_y), 0.0, 1.0);
    return GrayImage(rows, cols, v);
}

GrayImage blobs(std::mt19937_64& rng, int rows, int cols) {
    // Random Gaussian blobs: plenty of distinctive corners.
    std::vector<double> v(static_cast<std::size_t>(rows) * cols, 0.2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 60; ++k) {
        const double cx = u(rng) * cols, cy = u(rng) * rows, s = 2.0 + 4.0 * u(rng), a = 0.6 * (u(rng) - 0.3);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const double d2 = (c - cx) * (c - cx) + (r - cy) * (r - cy);
                v[static_cast<std::size_t>(r) * cols + c] += a * std::exp(-d2 / (2 * s * s));
            }
    }
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    return GrayImage(rows, cols, v);
}

CorrespondenceSet exact_pairs(const AffineTransform& t, const std::vector<Point>& pts) {
    CorrespondenceSet s;
    for (const Point& p : pts) s.push_back({p, t.apply(p), 1.0});
    return s;
}

} // namespace

TEST_CASE("corner detection") {
    CHECK(detect_corners(GrayImage(32, 32, 0.4), 50).empty());
    CHECK_THROWS_AS(detect_corners(GrayImage(15, 32, 0.4), 50), std::invalid_argument);

    GrayImage dot = [] {
        std::vector<double> v(32 * 32, 0.0);
        v[16 * 32 + 12] = 1.0;
        return GrayImage(32, 32, v);
    }();
    const auto found = detect_corners(dot, 10);
    REQUIRE_FALSE(found.empty());
    CHECK(std::abs(found[0].row - 16) <= 2);
    CHECK(std::abs(found[0].col - 12) <= 2);

    std::vector<double> board(32 * 32);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c) board[static_cast<std::size_t>(r) * 32 + c] = ((r / 8 + c / 8) % 2) ? 1.0 : 0.0;
    const auto junctions = detect_corners(GrayImage(32, 32, board), 100);
    CHECK(junctions.size() == 9);
    for (const Corner& c : junctions) {
        const double jr = std::round(c.row / 8.0) * 8.0 - 0.5, jc = std::round(c.col / 8.0) * 8.0 - 0.5;
        CHECK(std::fabs(c.row - jr) <= 1.0);
        CHECK(std::fabs(c.col - jc) <= 1.0);
    }
    for (std::size_t i = 1; i < junctions.size(); ++i) CHECK(junctions[i - 1].response >= junctions[i].response);
}

TEST_CASE("NCC matching") {
    std::mt19937_64 rng(1);
    const GrayImage ref = blobs(rng, 96, 96);
    const auto corners = detect_corners(ref, 60);
    REQUIRE(corners.size() >= 5);

    const auto self = match_correspondences(ref, ref, corners);
    const auto interior = std::count_if(corners.begin(), corners.end(), [](const Corner& c) {
        return c.row >= 5 && c.col >= 5 && c.row < 91 && c.col < 91;
    });
    CHECK(static_cast<long>(self.size()) == interior);
    for (const auto& p : self) {
        CHECK(p.score == doctest::Approx(1.0));
        CHECK(std::fabs(p.ref.x - p.test.x) <= 0.25);
        CHECK(std::fabs(p.ref.y - p.test.y) <= 0.25);
    }

    // test(x, y) = ref(x - 3, y): content moves 3 px to the right.
    std::vector<double> shifted(ref.size(), 0.2);
    for (int r = 0; r < 96; ++r)
        for (int c = 3; c < 96; ++c) shifted[static_cast<std::size_t>(r) * 96 + c] = ref(r, c - 3);
    const auto moved = match_correspondences(ref, GrayImage(96, 96, shifted), corners);
    REQUIRE_FALSE(moved.empty());
    for (const auto& p : moved) {
        CHECK(std::fabs(p.test.x - p.ref.x - 3.0) <= 0.25);
        CHECK(std::fabs(p.test.y - p.ref.y) <= 0.25);
    }

    CHECK(match_correspondences(ref, GrayImage(96, 96, 0.5), corners).empty());
    std::vector<double> noise(ref.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : noise) v = u(rng);
    CHECK(match_correspondences(ref, GrayImage(96, 96, noise), corners).empty());

    CHECK_THROWS_AS(match_correspondences(ref, GrayImage(90, 96), corners), std::invalid_argument);

    std::ostringstream csv;
    write_correspondences_csv(csv, self);
    const std::string text = csv.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(self.size()));
}

TEST_CASE("affine estimation examples") {
    const std::vector<Point> grid = {{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 3}, {2, 8}};
    const AffineTransform id = estimate_affine(exact_pairs(AffineTransform::identity(), grid));
    CHECK(id.a11 == doctest::Approx(1.0));
    CHECK(id.a12 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(id.tx == doctest::Approx(0.0).epsilon(1e-12));

    CorrespondenceSet shift = {{{0, 0}, {2, 3}, 1}, {{1, 0}, {3, 3}, 1}, {{0, 1}, {2, 4}, 1}};
    const AffineTransform t = estimate_affine(shift);
    CHECK(t.a11 == doctest::Approx(1.0));
    CHECK(t.a22 == doctest::Approx(1.0));
    CHECK(t.a12 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.tx == doctest::Approx(2.0));
    CHECK(t.ty == doctest::Approx(3.0));

    AffineTransform twice;
    twice.a11 = twice.a22 = 2.0;
    const AffineTransform s = estimate_affine(exact_pairs(twice, grid));
    CHECK(s.a11 == doctest::Approx(2.0));
    CHECK(s.a22 == doctest::Approx(2.0));
    CHECK(s.a21 == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_affine(CorrespondenceSet(shift.begin(), shift.begin() + 2)), EstimationError);
    CorrespondenceSet line = {{{0, 0}, {0, 0}, 1}, {{1, 1}, {1, 1}, 1}, {{2, 2}, {2, 2}, 1}, {{3, 3}, {3, 3}, 1}};
    CHECK_THROWS_AS(estimate_affine(line), EstimationError);
}

TEST_CASE("RANSAC recovers transforms despite outliers and is deterministic") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double ang = (u(rng) * 2 - 1) * 10.0 * std::numbers::pi / 180.0, sc = 0.9 + 0.2 * u(rng);
        AffineTransform truth{sc * std::cos(ang), -sc * std::sin(ang), sc * std::sin(ang), sc * std::cos(ang),
                              (u(rng) * 2 - 1) * 20.0, (u(rng) * 2 - 1) * 20.0};
        CorrespondenceSet pairs;
        for (int k = 0; k < 100; ++k) {
            const Point p{u(rng) * 500, u(rng) * 500};
            Point q = truth.apply(p);
            if (k % 10 < 3) q = {u(rng) * 500, u(rng) * 500};
            pairs.push_back({p, q, 1.0});
        }
        const AffineEstimate a = estimate_affine_ransac(pairs);
        const AffineEstimate b = estimate_affine_ransac(pairs);
        CHECK(a.transform.a11 == b.transform.a11);
        CHECK(a.transform.ty == b.transform.ty);
        CHECK(a.inliers == b.inliers);
        double err = 0.0;
        for (int k = 0; k < 50; ++k) {
            const Point p{u(rng) * 500, u(rng) * 500};
            const Point e = a.transform.apply(p), g = truth.apply(p);
            err += std::hypot(e.x - g.x, e.y - g.y);
        }
        CHECK(err / 50 < 1e-6);
    }
}

TEST_CASE("warping") {
    const GrayImage img = render(40, 50);
    CHECK(warp_image(img, AffineTransform::identity()) == img);

    AffineTransform shift;
    shift.tx = -3.0; // out(x, y) = in(x - 3, y)
    const GrayImage moved = warp_image(img, shift);
    for (int r = 0; r < 40; ++r) {
        for (int c = 0; c < 3; ++c) CHECK(moved(r, c) == 0.0);
        for (int c = 3; c < 50; ++c) CHECK(moved(r, c) == img(r, c - 3));
    }
    const BinaryMask cov = warp_coverage(shift, 40, 50, 40, 50);
    CHECK(cov.count() == 40u * 47u);

    AffineTransform singular;
    singular.a11 = 0.0;
    singular.a12 = 0.0;
    CHECK_THROWS_AS(warp_image(img, singular), std::invalid_argument);

    const GrayImage flat(30, 30, 0.6);
    AffineTransform rot{std::cos(0.1), -std::sin(0.1), std::sin(0.1), std::cos(0.1), 2.0, -1.0};
    const GrayImage wf = warp_image(flat, rot);
    const BinaryMask wc = warp_coverage(rot, 30, 30, 30, 30);
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c)
            if (wc(r, c)) CHECK(wf(r, c) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("warp round trip on a smooth image") {
    const GrayImage img = render(80, 80);
    const AffineTransform t{std::cos(0.05), -std::sin(0.05), std::sin(0.05), std::cos(0.05), 1.5, -2.25};
    const GrayImage there = warp_image(img, t);
    const GrayImage back = warp_image(there, t.inverse());
    double sq = 0.0;
    int n = 0;
    for (int r = 4; r < 76; ++r)
        for (int c = 4; c < 76; ++c) {
            const Point p = t.inverse().apply({double(c), double(r)});
            const Point q = t.apply(p);
            if (p.x < 0 || p.y < 0 || p.x > 79 || p.y > 79 || q.x < 0 || q.y < 0 || q.x > 79 || q.y > 79) continue;
            const double d = back(r, c) - img(r, c);
            sq += d * d;
            ++n;
        }
    CHECK(std::sqrt(sq / n) <= 0.02);
}

TEST_CASE("register_images aligns a shifted view") {
    const GrayImage ref = render(128, 128);
    const GrayImage test = render(128, 128, 2.0, -1.0); // test(x, y) = tex(x + 2, y - 1)
    const Registration reg = register_images(ref, test);
    // ref point (x, y) appears in test at (x - 2, y + 1).
    CHECK(reg.transform.tx == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(reg.transform.ty == doctest::Approx(1.0).epsilon(0.05));
    CHECK(reg.inliers >= 3);
}

TEST_CASE("register_images recovers a fractional pure translation") {
    std::mt19937_64 rng(12);
    const GrayImage ref = blobs(rng, 128, 128);
    // Bilinear resampling at (x + 2.4, y - 1.3) moves content by (-2.4, +1.3).
    const GrayImage test = warp_image(ref, AffineTransform{1, 0, 0, 1, 2.4, -1.3});
    const Registration reg = register_images(ref, test);
    CHECK(std::fabs(reg.transform.tx + 2.4) <= 0.1);
    CHECK(std::fabs(reg.transform.ty - 1.3) <= 0.1);
    CHECK(std::fabs(reg.transform.a11 - 1.0) <= 0.005);
    CHECK(std::fabs(reg.transform.a12) <= 0.005);
}
