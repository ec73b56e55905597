#include "wrnn/kernels.hpp"

namespace wrnn::kernels::detail {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void scale_scalar(std::size_t n, double a, double* x) {
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= a;
}

void add_scalar(std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += x[i];
}

}  // namespace wrnn::kernels::detail
