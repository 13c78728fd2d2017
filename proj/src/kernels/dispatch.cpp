#include "mimo/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace mimo::simd {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return Backend::avx2;
#elif defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

namespace {

const Ops* ops_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &scalar_ops();
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        if (avx2_supported()) return &avx2_ops();
#endif
        return nullptr;
    case Backend::neon:
#if defined(__aarch64__)
        return &neon_ops();
#else
        return nullptr;
#endif
    }
    return nullptr;
}

std::atomic<Backend> g_backend{detect_backend()};

} // namespace

const Ops& active() {
    return *ops_for(g_backend.load(std::memory_order_relaxed));
}

Backend active_backend() {
    return g_backend.load(std::memory_order_relaxed);
}

void force_backend(Backend b) {
    if (ops_for(b) == nullptr) {
        throw std::invalid_argument("simd backend '" + backend_name(b) +
                                    "' is not available on this machine");
    }
    g_backend.store(b, std::memory_order_relaxed);
}

Backend backend_from_name(const std::string& name) {
    if (name == "auto") return detect_backend();
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    if (name == "neon") return Backend::neon;
    throw std::invalid_argument("unknown simd backend '" + name +
                                "' (expected auto, scalar, avx2 or neon)");
}

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    case Backend::neon:
        return "neon";
    }
    return "scalar";
}

} // namespace mimo::simd
