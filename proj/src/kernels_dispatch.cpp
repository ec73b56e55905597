#include "wrnn/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace wrnn::kernels {

namespace {

struct Backend {
    const char* name;
    void (*axpy)(std::size_t, double, const double*, double*);
    void (*scale)(std::size_t, double, double*);
    void (*add)(std::size_t, const double*, double*);
};

constexpr Backend kScalar{"scalar", detail::axpy_scalar, detail::scale_scalar,
                          detail::add_scalar};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Backend kAvx2{"avx2", detail::axpy_avx2, detail::scale_avx2,
                        detail::add_avx2};
#endif
#if defined(__aarch64__)
constexpr Backend kNeon{"neon", detail::axpy_neon, detail::scale_neon,
                        detail::add_neon};
#endif

const Backend* find_backend(const char* name) {
    if (std::strcmp(name, "scalar") == 0)
        return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(name, "avx2") == 0 && __builtin_cpu_supports("avx2"))
        return &kAvx2;
#endif
#if defined(__aarch64__)
    if (std::strcmp(name, "neon") == 0)
        return &kNeon;
#endif
    return nullptr;
}

const Backend* detect_backend() {
    if (const char* env = std::getenv("WRNN_KERNELS")) {
        const Backend* b = find_backend(env);
        if (!b)
            throw std::runtime_error(
                std::string("WRNN_KERNELS requests unavailable backend: ") + env);
        return b;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2"))
        return &kAvx2;
#endif
#if defined(__aarch64__)
    return &kNeon;
#endif
    return &kScalar;
}

const Backend*& active() {
    static const Backend* backend = detect_backend();
    return backend;
}

}  // namespace

void axpy(std::size_t n, double a, const double* x, double* y) {
    active()->axpy(n, a, x, y);
}

void scale(std::size_t n, double a, double* x) {
    active()->scale(n, a, x);
}

void add(std::size_t n, const double* x, double* y) {
    active()->add(n, x, y);
}

const char* backend_name() {
    return active()->name;
}

void force_backend(const char* name) {
    const Backend* b = find_backend(name);
    if (!b)
        throw std::runtime_error(std::string("unknown or unsupported kernel backend: ") +
                                 name);
    active() = b;
}

}  // namespace wrnn::kernels
