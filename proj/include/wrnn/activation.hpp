#pragma once

// Gaussian RBF transfer functions and the antisymmetric mother wavelet
// assembled from two mirrored RBF halves, with numerical admissibility
// checks by adaptive quadrature.

namespace wrnn::activation {

struct RbfFunction {
    double center = 0.0;
    double width = 1.0;  // must be > 0
};

// exp(-((x-center)/width)^2) and its analytic derivative.
double rbf_eval(const RbfFunction& f, double x);
double rbf_grad(const RbfFunction& f, double x);

// Antisymmetric composition of two mirrored RBF halves on [-1, 1]:
//   +f(2x+1) on [-1, 0),  0 at x = 0,  -f(2x-1) on (0, 1],
// extended with period 2 outside (shift index l maps x to x - 2l).
struct CompositeMotherWavelet {
    RbfFunction base;  // evaluated on [-1, 1]; even about 0 by default
};

double mother_eval(const CompositeMotherWavelet& w, double x);

// Quadrature of the mother wavelet over [2h+1, 2k+1] (absolute tolerance
// 1e-10; callers assert the result is small).  Throws if h >= k.
double check_admissibility(const CompositeMotherWavelet& w, int h, int k);

// Quadrature of the mother wavelet over an arbitrary [a, b]; unlike the
// admissibility endpoints this is generally nonzero.  Throws if a > b.
double integrate_mother(const CompositeMotherWavelet& w, double a, double b);

// Quadrature of the squared mother wavelet over [-1, 1]; the unit-norm
// analog scales the wavelet by the inverse square root of this.
double mother_squared_norm(const CompositeMotherWavelet& w);

// Hidden-neuron transfer function g(x) = exp(-x^2) and its derivative.
double hidden_activation(double x);
double hidden_activation_grad(double x);

}  // namespace wrnn::activation
