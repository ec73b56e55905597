#pragma once

#include <cstddef>

// Element-parallel vector primitives with runtime backend selection.
//
// Backends must be bit-identical: each element is produced by the same
// sequence of IEEE operations in every implementation (multiply then add,
// no FMA), so swapping backends never changes results.  Reductions are
// deliberately absent from this interface; callers keep them scalar to
// preserve a fixed summation order.
//
// The backend is chosen once at first use: the WRNN_KERNELS environment
// variable ("scalar", "avx2", "neon") forces a backend, otherwise the best
// one supported by the CPU is picked.

namespace wrnn::kernels {

// y[i] += a * x[i]
void axpy(std::size_t n, double a, const double* x, double* y);

// x[i] *= a
void scale(std::size_t n, double a, double* x);

// y[i] += x[i]
void add(std::size_t n, const double* x, double* y);

// Name of the active backend ("scalar", "avx2" or "neon").
const char* backend_name();

// Force a backend by name; throws std::runtime_error if it is unknown or
// not supported on this machine.  Intended for tests.
void force_backend(const char* name);

namespace detail {
void axpy_scalar(std::size_t n, double a, const double* x, double* y);
void scale_scalar(std::size_t n, double a, double* x);
void add_scalar(std::size_t n, const double* x, double* y);
#if defined(__x86_64__) || defined(_M_X64)
void axpy_avx2(std::size_t n, double a, const double* x, double* y);
void scale_avx2(std::size_t n, double a, double* x);
void add_avx2(std::size_t n, const double* x, double* y);
#endif
#if defined(__aarch64__)
void axpy_neon(std::size_t n, double a, const double* x, double* y);
void scale_neon(std::size_t n, double a, double* x);
void add_neon(std::size_t n, const double* x, double* y);
#endif
}  // namespace detail

}  // namespace wrnn::kernels
