#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wrnn/dwt.hpp"
#include "wrnn/ingest.hpp"

// The WRNN predictor: input assembly from undecimated wavelet coefficient
// rows plus delayed copies and fed-back outputs, a 19-16-16-1 network with
// Gaussian RBF hidden layers and an affine output, batch gradient-descent
// training with momentum and an adaptive learning rate, and r-step-ahead
// series prediction.

namespace wrnn::net {

struct WrnnTopology {
    std::size_t wavelet_levels = 4;   // M
    std::size_t exogenous_delays = 3; // coefficient rows at n, n-1, n-2
    std::size_t feedback_taps = 4;    // delayed outputs
    std::vector<std::size_t> hidden = {16, 16};
    int horizon = 6;                  // r, steps ahead

    std::size_t coeff_row_width() const { return wavelet_levels + 1; }
    std::size_t input_width() const {
        return exogenous_delays * coeff_row_width() + feedback_taps;
    }
};

// Weight matrices are column-major (input-major): w[j * rows + i] is the
// weight from input j to neuron i, so a forward matvec is one axpy per
// input column.
struct WrnnModel {
    WrnnTopology topology;
    std::vector<double> w1, b1;  // input -> hidden1
    std::vector<double> w2, b2;  // hidden1 -> hidden2
    std::vector<double> w3, b3;  // hidden2 -> output (affine, no squashing)
    ingest::NormStats norm;      // frozen training normalization
    std::uint64_t seed = 0;
    std::string wavelet = "bior3.7";
    dwt::Extension extension = dwt::Extension::symmetric;
    bool causal = true;
};

struct TrainConfig {
    double initial_learning_rate = 0.01;
    double momentum = 0.9;
    double lr_increase = 1.05;
    double lr_decrease = 0.7;
    double max_error_growth = 1.04;
    std::size_t epochs = 1000;
    std::uint64_t seed = 1;
    double train_fraction = 1.0;  // leading fraction of the series used
    double target_mse = 0.0;      // early stop when reached; 0 disables
};

struct TrainReport {
    std::vector<double> mse_curve;  // one entry per completed epoch
    std::size_t final_epoch = 0;
    std::string stopping_reason;
};

struct TrainingPair {
    std::size_t n = 0;  // assembly time index
    std::vector<double> input;
    double target = 0.0;  // normalized x(n + r)
};

struct Gradients {
    std::vector<double> w1, b1, w2, b2, w3, b3;
};

// Concatenates [row n, row n-1, row n-2, y(n-1), y(n-2), y(n-3), y(n-4)].
// The feedback taps are the four most recent entries of `outputs`, whose
// tail must hold the (normalized) output history up to step n-1.  Throws if
// n < 2 or fewer than four outputs are available.
std::vector<double> build_input_vector(const dwt::WaveletCoeffs& coeffs,
                                       const std::vector<double>& outputs,
                                       std::size_t n, const WrnnTopology& topology);

// Fresh model with weights and biases uniform in [-0.5, 0.5] scaled by
// 1/sqrt(fan-in), drawn from a seeded generator in a fixed order.
WrnnModel init_model(const WrnnTopology& topology, std::uint64_t seed);

// out = W3 g(W2 g(W1 in + b1) + b2) + b3 with g(z) = exp(-z^2).
double forward(const WrnnModel& model, const std::vector<double>& input);

// Gradient of the squared error (forward(input) - target)^2 with respect to
// every weight and bias, by analytic backpropagation.
Gradients gradient(const WrnnModel& model, const std::vector<double>& input,
                   double target);

// Mean of per-pair gradients accumulated in ascending-n order regardless of
// the presentation order of `pairs`; second member is the batch MSE.
std::pair<Gradients, double> batch_gradient(const WrnnModel& model,
                                            const std::vector<TrainingPair>& pairs);

// Teacher-forced pairs over a normalized series and its coefficient rows:
// input at n, target x(n + r), for n in [feedback_taps, N-1-r].
std::vector<TrainingPair> assemble_pairs(const dwt::WaveletCoeffs& coeffs,
                                         const std::vector<double>& normalized,
                                         const WrnnTopology& topology, int r);

// Full training pipeline: standardize the leading train_fraction of the
// series, decompose (causal), assemble teacher-forced pairs, then batch
// gradient descent with momentum.  Per epoch, if the MSE grew by more than
// max_error_growth relative to the previous epoch the update is discarded
// and the learning rate shrinks; if the MSE decreased the rate grows.
// Deterministic for a fixed seed and config.
std::pair<WrnnModel, TrainReport> train(const ingest::TimeSeries& series,
                                        const TrainConfig& config,
                                        const WrnnTopology& topology);

// One r-step-ahead prediction per valid assembly index n, returned as
// (n + r, predicted requests/hour) in original units.  Open-loop (default)
// feeds actual history into the feedback taps; closed-loop feeds the
// model's own earlier predictions once the target index passes the warmup
// window.  Throws if r differs from the training horizon.
std::vector<std::pair<std::size_t, double>>
predict_series(const WrnnModel& model, const ingest::TimeSeries& series, int r,
               bool closed_loop = false);

// Versioned text format; numeric payload is hex floats, so save/load round
// trips are bit-exact and identical runs produce byte-identical files.
void save_model(const WrnnModel& model, const std::string& path);
WrnnModel load_model(const std::string& path);

}  // namespace wrnn::net
