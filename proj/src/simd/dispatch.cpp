#include "fabric/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fabric::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(FABRIC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend initial_backend() noexcept {
    Backend best = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
    if (const char* env = std::getenv("INSPECT_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    }
    return best;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

} // namespace

bool backend_available(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
    }
    current().store(b, std::memory_order_relaxed);
}

const Kernels& kernels(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument("SIMD backend not available: " + std::string(backend_name(b)));
    }
#if defined(FABRIC_HAVE_AVX2)
    if (b == Backend::Avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

const Kernels& kernels() noexcept {
#if defined(FABRIC_HAVE_AVX2)
    if (active_backend() == Backend::Avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

} // namespace fabric::simd
