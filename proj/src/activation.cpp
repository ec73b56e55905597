#include "wrnn/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wrnn::activation {

namespace {

// Adaptive Simpson on an interval where the integrand is smooth.
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate_smooth(F&& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40);
}

// The mother wavelet jumps at every integer, so integrate unit intervals
// [m, m+1] separately and sum.  Piece endpoints are sampled one ulp inside
// so an integer boundary contributes its one-sided limit, not the jump-point
// convention value.
template <typename F>
double integrate_piecewise(F&& f, double a, double b, double tol) {
    double total = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(std::floor(lo) + 1.0, b);
        auto inside = [&f, lo, hi](double x) {
            if (x == lo)
                x = std::nextafter(lo, hi);
            else if (x == hi)
                x = std::nextafter(hi, lo);
            return f(x);
        };
        total += integrate_smooth(inside, lo, hi, tol);
        lo = hi;
    }
    return total;
}

}  // namespace

double rbf_eval(const RbfFunction& f, double x) {
    const double z = (x - f.center) / f.width;
    return std::exp(-z * z);
}

double rbf_grad(const RbfFunction& f, double x) {
    const double z = (x - f.center) / f.width;
    return -2.0 * z / f.width * std::exp(-z * z);
}

double mother_eval(const CompositeMotherWavelet& w, double x) {
    // Reduce to one period; remainder() returns a value in [-1, 1].
    const double t = std::remainder(x, 2.0);
    if (t == 0.0)
        return 0.0;
    if (t < 0.0)
        return rbf_eval(w.base, 2.0 * t + 1.0);
    return -rbf_eval(w.base, 2.0 * t - 1.0);
}

double check_admissibility(const CompositeMotherWavelet& w, int h, int k) {
    if (h >= k)
        throw std::runtime_error("check_admissibility: need h < k, got h=" +
                                 std::to_string(h) + " k=" + std::to_string(k));
    const double a = 2.0 * h + 1.0;
    const double b = 2.0 * k + 1.0;
    auto f = [&w](double x) { return mother_eval(w, x); };
    return integrate_piecewise(f, a, b, 1e-12);
}

double integrate_mother(const CompositeMotherWavelet& w, double a, double b) {
    if (a > b)
        throw std::runtime_error("integrate_mother: interval is reversed");
    auto f = [&w](double x) { return mother_eval(w, x); };
    return integrate_piecewise(f, a, b, 1e-12);
}

double mother_squared_norm(const CompositeMotherWavelet& w) {
    auto f = [&w](double x) {
        const double v = mother_eval(w, x);
        return v * v;
    };
    return integrate_piecewise(f, -1.0, 1.0, 1e-12);
}

double hidden_activation(double x) {
    return std::exp(-x * x);
}

double hidden_activation_grad(double x) {
    return -2.0 * x * std::exp(-x * x);
}

}  // namespace wrnn::activation
