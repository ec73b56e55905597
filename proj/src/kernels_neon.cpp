#include "wrnn/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace wrnn::kernels::detail {

// vmulq_f64 followed by vaddq_f64 mirrors the scalar "mul then add" exactly
// (no fused multiply-add), so results are bit-identical to the scalar backend.

void axpy_neon(std::size_t n, double a, const double* x, double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vx = vld1q_f64(x + i);
        float64x2_t vy = vld1q_f64(y + i);
        vy = vaddq_f64(vy, vmulq_f64(va, vx));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

void scale_neon(std::size_t n, double a, double* x) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vx = vld1q_f64(x + i);
        vst1q_f64(x + i, vmulq_f64(vx, va));
    }
    for (; i < n; ++i)
        x[i] *= a;
}

void add_neon(std::size_t n, const double* x, double* y) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vx = vld1q_f64(x + i);
        float64x2_t vy = vld1q_f64(y + i);
        vst1q_f64(y + i, vaddq_f64(vy, vx));
    }
    for (; i < n; ++i)
        y[i] += x[i];
}

}  // namespace wrnn::kernels::detail

#endif
