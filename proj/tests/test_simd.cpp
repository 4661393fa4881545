#include "fabric/edge.hpp"
#include "fabric/simd/kernels.hpp"

#include <doctest.h>

#include <cstring>
#include <random>
#include <stdexcept>

using namespace fabric;
using namespace fabric::simd;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("backend selection") {
    CHECK(backend_available(Backend::Scalar));
    CHECK(backend_name(Backend::Scalar) == "scalar");
    CHECK(backend_name(Backend::Avx2) == "avx2");
    const Backend before = active_backend();
    set_backend(Backend::Scalar);
    CHECK(kernels().backend == Backend::Scalar);
    if (!backend_available(Backend::Avx2)) {
        CHECK_THROWS_AS(set_backend(Backend::Avx2), std::invalid_argument);
    }
    set_backend(before);
}

TEST_CASE("SIMD kernels are bit-identical to the scalar reference") {
    if (!backend_available(Backend::Avx2)) {
        MESSAGE("AVX2 unavailable; only the scalar backend is exercised");
        return;
    }
    const Kernels& s = kernels(Backend::Scalar);
    const Kernels& v = kernels(Backend::Avx2);
    std::mt19937_64 rng(99);

    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1023u}) {
        const auto a = random_values(rng, n, 0.0, 1.0), b = random_values(rng, n, 0.0, 1.0);
        std::vector<double> os(n), ov(n);
        s.abs_diff(a.data(), b.data(), os.data(), n);
        v.abs_diff(a.data(), b.data(), ov.data(), n);
        CHECK(bit_equal(os, ov));

        const auto x = random_values(rng, n, -3.0, 3.0), y = random_values(rng, n, -3.0, 3.0);
        s.magnitude(x.data(), y.data(), os.data(), n);
        v.magnitude(x.data(), y.data(), ov.data(), n);
        CHECK(bit_equal(os, ov));

        std::vector<std::uint8_t> ls(n), lv(n);
        auto t = a;
        if (n > 2) {
            t[0] = 0.035;
            t[1] = 0.150;
        }
        s.classify(t.data(), n, 0.035, 0.150, ls.data());
        v.classify(t.data(), n, 0.035, 0.150, lv.data());
        CHECK(ls == lv);
    }
}

TEST_CASE("column filtering is bit-identical across backends") {
    if (!backend_available(Backend::Avx2)) return;
    std::mt19937_64 rng(7);
    for (int order : {1, 2, 3, 4}) {
        const auto f = edge::ZeroPhaseHighPass::design(order, 0.9, 48);
        for (std::size_t width : {1u, 3u, 4u, 7u, 16u, 33u}) {
            const std::size_t stride = width + (width % 3);
            const auto in = random_values(rng, 48 * stride, 0.0, 1.0);
            std::vector<double> os(in.size(), 0.0), ov(in.size(), 0.0);
            kernels(Backend::Scalar).filter_columns(f.plan(), in.data(), os.data(), width, stride);
            kernels(Backend::Avx2).filter_columns(f.plan(), in.data(), ov.data(), width, stride);
            CHECK(bit_equal(os, ov));
        }
    }
}

TEST_CASE("edge extraction does not depend on the active backend") {
    if (!backend_available(Backend::Avx2)) return;
    std::mt19937_64 rng(8);
    const GrayImage img(37, 45, random_values(rng, 37 * 45, 0.0, 1.0));
    const auto f = edge::ZeroPhaseHighPass::design(3, 0.9, 64);
    const Backend before = active_backend();
    set_backend(Backend::Scalar);
    const auto es = edge::extract_edges(img, f);
    set_backend(Backend::Avx2);
    const auto ev = edge::extract_edges(img, f);
    set_backend(before);
    CHECK(bit_equal(es.values, ev.values));
}
