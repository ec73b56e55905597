#include "wrnn/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wrnn/activation.hpp"
#include "wrnn/kernels.hpp"

namespace wrnn::net {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

void validate_topology(const WrnnTopology& topo) {
    if (topo.wavelet_levels < 1)
        fail("topology: wavelet_levels must be >= 1");
    if (topo.hidden.size() != 2 || topo.hidden[0] == 0 || topo.hidden[1] == 0)
        fail("topology: exactly two non-empty hidden layers are supported");
    if (topo.exogenous_delays < 1 || topo.feedback_taps < 1)
        fail("topology: delays and feedback taps must be >= 1");
    if (topo.horizon < 1)
        fail("topology: horizon must be >= 1");
}

void validate_model(const WrnnModel& m) {
    validate_topology(m.topology);
    const std::size_t in = m.topology.input_width();
    const std::size_t h1 = m.topology.hidden[0];
    const std::size_t h2 = m.topology.hidden[1];
    if (m.w1.size() != in * h1 || m.b1.size() != h1 || m.w2.size() != h1 * h2 ||
        m.b2.size() != h2 || m.w3.size() != h2 || m.b3.size() != 1)
        fail("model: weight shapes inconsistent with topology");
}

struct Scratch {
    std::vector<double> z1, a1, z2, a2, delta1, delta2;
    double out = 0.0;

    explicit Scratch(const WrnnTopology& topo)
        : z1(topo.hidden[0]), a1(topo.hidden[0]), z2(topo.hidden[1]),
          a2(topo.hidden[1]), delta1(topo.hidden[0]), delta2(topo.hidden[1]) {}
};

void forward_into(const WrnnModel& m, const std::vector<double>& input, Scratch& s) {
    const std::size_t in = m.topology.input_width();
    const std::size_t h1 = m.topology.hidden[0];
    const std::size_t h2 = m.topology.hidden[1];
    if (input.size() != in)
        fail("forward: input width " + std::to_string(input.size()) +
             " != topology width " + std::to_string(in));

    s.z1 = m.b1;
    for (std::size_t j = 0; j < in; ++j)
        kernels::axpy(h1, input[j], &m.w1[j * h1], s.z1.data());
    for (std::size_t i = 0; i < h1; ++i)
        s.a1[i] = activation::hidden_activation(s.z1[i]);

    s.z2 = m.b2;
    for (std::size_t j = 0; j < h1; ++j)
        kernels::axpy(h2, s.a1[j], &m.w2[j * h2], s.z2.data());
    for (std::size_t i = 0; i < h2; ++i)
        s.a2[i] = activation::hidden_activation(s.z2[i]);

    double out = m.b3[0];
    for (std::size_t j = 0; j < h2; ++j)
        out += m.w3[j] * s.a2[j];
    s.out = out;
}

Gradients zero_gradients(const WrnnTopology& topo) {
    Gradients g;
    g.w1.assign(topo.input_width() * topo.hidden[0], 0.0);
    g.b1.assign(topo.hidden[0], 0.0);
    g.w2.assign(topo.hidden[0] * topo.hidden[1], 0.0);
    g.b2.assign(topo.hidden[1], 0.0);
    g.w3.assign(topo.hidden[1], 0.0);
    g.b3.assign(1, 0.0);
    return g;
}

// Adds the gradient of (forward(input) - target)^2 into g; returns the
// squared error.  Backpropagation with g'(z) = -2 z g(z).
double accumulate_gradient(const WrnnModel& m, const std::vector<double>& input,
                           double target, Gradients& g, Scratch& s) {
    const std::size_t in = m.topology.input_width();
    const std::size_t h1 = m.topology.hidden[0];
    const std::size_t h2 = m.topology.hidden[1];

    forward_into(m, input, s);
    const double err = s.out - target;
    const double dout = 2.0 * err;

    g.b3[0] += dout;
    kernels::axpy(h2, dout, s.a2.data(), g.w3.data());

    for (std::size_t i = 0; i < h2; ++i)
        s.delta2[i] = m.w3[i] * dout * activation::hidden_activation_grad(s.z2[i]);
    kernels::add(h2, s.delta2.data(), g.b2.data());
    for (std::size_t j = 0; j < h1; ++j)
        kernels::axpy(h2, s.a1[j], s.delta2.data(), &g.w2[j * h2]);

    for (std::size_t j = 0; j < h1; ++j) {
        double back = 0.0;  // fixed-order scalar reduction
        for (std::size_t i = 0; i < h2; ++i)
            back += m.w2[j * h2 + i] * s.delta2[i];
        s.delta1[j] = back * activation::hidden_activation_grad(s.z1[j]);
    }
    kernels::add(h1, s.delta1.data(), g.b1.data());
    for (std::size_t j = 0; j < in; ++j)
        kernels::axpy(h1, input[j], s.delta1.data(), &g.w1[j * h1]);

    return err * err;
}

void scale_gradients(Gradients& g, double a) {
    kernels::scale(g.w1.size(), a, g.w1.data());
    kernels::scale(g.b1.size(), a, g.b1.data());
    kernels::scale(g.w2.size(), a, g.w2.data());
    kernels::scale(g.b2.size(), a, g.b2.data());
    kernels::scale(g.w3.size(), a, g.w3.data());
    kernels::scale(g.b3.size(), a, g.b3.data());
}

}  // namespace

std::vector<double> build_input_vector(const dwt::WaveletCoeffs& coeffs,
                                       const std::vector<double>& outputs,
                                       std::size_t n, const WrnnTopology& topology) {
    validate_topology(topology);
    const std::size_t width = topology.coeff_row_width();
    if (coeffs.levels + 1 != width)
        fail("build_input_vector: coefficient rows have " +
             std::to_string(coeffs.levels + 1) + " columns, topology wants " +
             std::to_string(width));
    if (n + 1 < topology.exogenous_delays)
        fail("build_input_vector: n=" + std::to_string(n) +
             " too small for " + std::to_string(topology.exogenous_delays) +
             " delayed rows");
    if (n >= coeffs.source_length)
        fail("build_input_vector: n=" + std::to_string(n) + " out of range");
    if (outputs.size() < topology.feedback_taps)
        fail("build_input_vector: need " + std::to_string(topology.feedback_taps) +
             " prior outputs, have " + std::to_string(outputs.size()));

    std::vector<double> input;
    input.reserve(topology.input_width());
    for (std::size_t d = 0; d < topology.exogenous_delays; ++d)
        for (std::size_t c = 0; c < width; ++c)
            input.push_back(coeffs.at(n - d, c));
    for (std::size_t k = 1; k <= topology.feedback_taps; ++k)
        input.push_back(outputs[outputs.size() - k]);
    return input;
}

WrnnModel init_model(const WrnnTopology& topology, std::uint64_t seed) {
    validate_topology(topology);
    WrnnModel m;
    m.topology = topology;
    m.seed = seed;

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;  // [-0.5, 0.5)
    };
    auto fill = [&uniform](std::vector<double>& v, std::size_t count,
                           std::size_t fan_in) {
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        v.resize(count);
        for (double& w : v)
            w = uniform() * s;
    };

    const std::size_t in = topology.input_width();
    const std::size_t h1 = topology.hidden[0];
    const std::size_t h2 = topology.hidden[1];
    fill(m.w1, in * h1, in);
    fill(m.b1, h1, in);
    fill(m.w2, h1 * h2, h1);
    fill(m.b2, h2, h1);
    fill(m.w3, h2, h2);
    fill(m.b3, 1, h2);
    return m;
}

double forward(const WrnnModel& model, const std::vector<double>& input) {
    validate_model(model);
    Scratch s(model.topology);
    forward_into(model, input, s);
    return s.out;
}

Gradients gradient(const WrnnModel& model, const std::vector<double>& input,
                   double target) {
    validate_model(model);
    Gradients g = zero_gradients(model.topology);
    Scratch s(model.topology);
    accumulate_gradient(model, input, target, g, s);
    return g;
}

std::pair<Gradients, double> batch_gradient(const WrnnModel& model,
                                            const std::vector<TrainingPair>& pairs) {
    validate_model(model);
    if (pairs.empty())
        fail("batch_gradient: no training pairs");
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&pairs](std::size_t a, std::size_t b) {
        return pairs[a].n < pairs[b].n;
    });

    Gradients g = zero_gradients(model.topology);
    Scratch s(model.topology);
    double se = 0.0;
    for (std::size_t idx : order)
        se += accumulate_gradient(model, pairs[idx].input, pairs[idx].target, g, s);
    const double inv = 1.0 / static_cast<double>(pairs.size());
    scale_gradients(g, inv);
    return {std::move(g), se * inv};
}

std::vector<TrainingPair> assemble_pairs(const dwt::WaveletCoeffs& coeffs,
                                         const std::vector<double>& normalized,
                                         const WrnnTopology& topology, int r) {
    validate_topology(topology);
    if (r < 1)
        fail("assemble_pairs: horizon must be >= 1");
    if (coeffs.source_length != normalized.size())
        fail("assemble_pairs: coefficients and series lengths differ");
    const std::size_t N = normalized.size();
    const std::size_t first =
        std::max<std::size_t>(topology.feedback_taps, topology.exogenous_delays - 1);
    std::vector<TrainingPair> pairs;
    if (N < first + static_cast<std::size_t>(r) + 1)
        return pairs;
    std::vector<double> buffer(normalized.begin(),
                               normalized.begin() + static_cast<std::ptrdiff_t>(first));
    for (std::size_t n = first; n + static_cast<std::size_t>(r) < N; ++n) {
        TrainingPair pair;
        pair.n = n;
        pair.input = build_input_vector(coeffs, buffer, n, topology);
        pair.target = normalized[n + static_cast<std::size_t>(r)];
        pairs.push_back(std::move(pair));
        buffer.push_back(normalized[n]);
    }
    return pairs;
}

std::pair<WrnnModel, TrainReport> train(const ingest::TimeSeries& series,
                                        const TrainConfig& config,
                                        const WrnnTopology& topology) {
    validate_topology(topology);
    if (!(config.momentum > 0.0 && config.momentum < 1.0))
        fail("train: momentum must be in (0, 1)");
    if (!(config.lr_increase > 1.0) || !(config.lr_decrease > 0.0) ||
        !(config.lr_decrease < 1.0))
        fail("train: need lr_increase > 1 and lr_decrease in (0, 1)");
    if (!(config.max_error_growth >= 1.0))
        fail("train: max_error_growth must be >= 1");
    if (config.epochs < 1)
        fail("train: epochs must be >= 1");
    if (!(config.initial_learning_rate > 0.0))
        fail("train: initial_learning_rate must be > 0");
    if (!(config.train_fraction > 0.0 && config.train_fraction <= 1.0))
        fail("train: train_fraction must be in (0, 1]");

    ingest::TimeSeries region = series;
    const std::size_t region_n = static_cast<std::size_t>(
        config.train_fraction * static_cast<double>(series.values.size()));
    if (region_n < series.values.size())
        region.values.resize(region_n);

    auto [normalized, stats] = ingest::standardize(region);
    dwt::FilterBank bank = dwt::bank_by_name("bior3.7", dwt::Extension::symmetric);
    dwt::WaveletCoeffs coeffs =
        dwt::decompose_undecimated(normalized.values, topology.wavelet_levels, bank,
                                   /*causal=*/true);
    std::vector<TrainingPair> pairs =
        assemble_pairs(coeffs, normalized.values, topology, topology.horizon);
    if (pairs.size() < 50)
        fail("train: series too short, produced " + std::to_string(pairs.size()) +
             " training pairs (need >= 50)");

    WrnnModel model = init_model(topology, config.seed);
    model.norm = stats;
    model.wavelet = "bior3.7";
    model.extension = dwt::Extension::symmetric;
    model.causal = true;

    Gradients velocity = zero_gradients(topology);
    WrnnModel backup = model;
    double lr = config.initial_learning_rate;
    double prev_mse = std::numeric_limits<double>::infinity();
    bool first_epoch = true;

    TrainReport report;
    report.stopping_reason = "epoch limit";

    std::vector<double>* params[6] = {&model.w1, &model.b1, &model.w2,
                                      &model.b2, &model.w3, &model.b3};
    std::vector<double>* vel[6] = {&velocity.w1, &velocity.b1, &velocity.w2,
                                   &velocity.b2, &velocity.w3, &velocity.b3};

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        auto [grads, mse] = batch_gradient(model, pairs);
        if (!std::isfinite(mse))
            fail("train: diverged (non-finite MSE) at epoch " + std::to_string(epoch) +
                 "; lower the learning rate");
        report.mse_curve.push_back(mse);

        if (!first_epoch && mse > prev_mse * config.max_error_growth) {
            // The step taken after the previous epoch made things worse:
            // roll it back, restart the momentum, and shrink the rate.
            model = backup;
            for (auto* v : vel)
                std::fill(v->begin(), v->end(), 0.0);
            lr *= config.lr_decrease;
        } else {
            if (!first_epoch && mse < prev_mse)
                lr *= config.lr_increase;
            backup = model;
            prev_mse = mse;

            const std::vector<double>* gs[6] = {&grads.w1, &grads.b1, &grads.w2,
                                                &grads.b2, &grads.w3, &grads.b3};
            for (int p = 0; p < 6; ++p) {
                kernels::scale(vel[p]->size(), config.momentum, vel[p]->data());
                kernels::axpy(vel[p]->size(), -lr, gs[p]->data(), vel[p]->data());
                kernels::add(params[p]->size(), vel[p]->data(), params[p]->data());
            }
        }
        first_epoch = false;

        if (config.target_mse > 0.0 && mse <= config.target_mse) {
            report.stopping_reason = "target mse reached";
            break;
        }
    }
    report.final_epoch = report.mse_curve.size();
    return {std::move(model), std::move(report)};
}

std::vector<std::pair<std::size_t, double>>
predict_series(const WrnnModel& model, const ingest::TimeSeries& series, int r,
               bool closed_loop) {
    validate_model(model);
    if (r != model.topology.horizon)
        fail("predict_series: horizon " + std::to_string(r) +
             " differs from training horizon " +
             std::to_string(model.topology.horizon));

    const std::size_t N = series.values.size();
    std::vector<double> normalized(N);
    for (std::size_t i = 0; i < N; ++i)
        normalized[i] = ingest::standardize_value(series.values[i], model.norm);

    dwt::FilterBank bank = dwt::bank_by_name(model.wavelet, model.extension);
    dwt::WaveletCoeffs coeffs = dwt::decompose_undecimated(
        normalized, model.topology.wavelet_levels, bank, model.causal);

    const std::size_t warmup = std::max<std::size_t>(
        model.topology.feedback_taps, model.topology.exogenous_delays - 1);
    std::vector<std::pair<std::size_t, double>> out;
    if (N < warmup + static_cast<std::size_t>(r) + 1)
        return out;

    Scratch s(model.topology);
    // `window` holds the value the feedback taps see at each slot.  In
    // closed-loop mode a prediction for slot n + r (made at pass n) replaces
    // the actual value there before any later pass reads it.
    std::vector<double> window = normalized;
    std::vector<double> buffer(window.begin(),
                               window.begin() + static_cast<std::ptrdiff_t>(warmup));
    for (std::size_t n = warmup; n + static_cast<std::size_t>(r) < N; ++n) {
        std::vector<double> input = build_input_vector(coeffs, buffer, n, model.topology);
        forward_into(model, input, s);
        if (closed_loop)
            window[n + static_cast<std::size_t>(r)] = s.out;
        out.emplace_back(n + static_cast<std::size_t>(r),
                         ingest::destandardize(s.out, model.norm));
        buffer.push_back(window[n]);
    }
    return out;
}

namespace {

void write_array(std::ofstream& out, const char* name,
                 const std::vector<double>& v) {
    out << name << ' ' << v.size() << '\n';
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%a", v[i]);
        out << buf << ((i + 1) % 8 == 0 || i + 1 == v.size() ? '\n' : ' ');
    }
}

std::vector<double> read_array(std::istream& in, const std::string& name) {
    std::string key;
    std::size_t count = 0;
    if (!(in >> key >> count) || key != name)
        fail("model file: expected array `" + name + "`, got `" + key + "`");
    std::vector<double> v(count);
    std::string tok;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> tok))
            fail("model file: truncated array `" + name + "`");
        char* end = nullptr;
        v[i] = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            fail("model file: bad number in `" + name + "`: " + tok);
    }
    return v;
}

}  // namespace

void save_model(const WrnnModel& model, const std::string& path) {
    validate_model(model);
    std::ofstream out(path);
    if (!out)
        fail("cannot write model file: " + path);
    out << "wrnn-model 1\n";
    out << "wavelet " << model.wavelet << '\n';
    out << "extension " << dwt::extension_name(model.extension) << '\n';
    out << "causal " << (model.causal ? 1 : 0) << '\n';
    out << "levels " << model.topology.wavelet_levels << '\n';
    out << "delays " << model.topology.exogenous_delays << '\n';
    out << "feedback " << model.topology.feedback_taps << '\n';
    out << "hidden " << model.topology.hidden[0] << ' ' << model.topology.hidden[1]
        << '\n';
    out << "horizon " << model.topology.horizon << '\n';
    out << "seed " << model.seed << '\n';
    char buf[96];
    std::snprintf(buf, sizeof buf, "norm %a %a\n", model.norm.mean, model.norm.std);
    out << buf;
    write_array(out, "w1", model.w1);
    write_array(out, "b1", model.b1);
    write_array(out, "w2", model.w2);
    write_array(out, "b2", model.b2);
    write_array(out, "w3", model.w3);
    write_array(out, "b3", model.b3);
    if (!out)
        fail("write failed: " + path);
}

WrnnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open model file: " + path);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "wrnn-model" || version != 1)
        fail("not a wrnn-model version 1 file: " + path);

    WrnnModel m;
    auto expect = [&in, &path](const char* key) {
        std::string k;
        if (!(in >> k) || k != key)
            fail("model file " + path + ": expected key `" + std::string(key) + "`");
    };
    expect("wavelet");
    in >> m.wavelet;
    std::string ext;
    expect("extension");
    in >> ext;
    m.extension = dwt::extension_from_name(ext);
    int causal = 1;
    expect("causal");
    in >> causal;
    m.causal = causal != 0;
    expect("levels");
    in >> m.topology.wavelet_levels;
    expect("delays");
    in >> m.topology.exogenous_delays;
    expect("feedback");
    in >> m.topology.feedback_taps;
    expect("hidden");
    m.topology.hidden.assign(2, 0);
    in >> m.topology.hidden[0] >> m.topology.hidden[1];
    expect("horizon");
    in >> m.topology.horizon;
    expect("seed");
    in >> m.seed;
    expect("norm");
    std::string mean_s, std_s;
    in >> mean_s >> std_s;
    m.norm.mean = std::strtod(mean_s.c_str(), nullptr);
    m.norm.std = std::strtod(std_s.c_str(), nullptr);
    if (!in)
        fail("model file " + path + ": truncated header");

    m.w1 = read_array(in, "w1");
    m.b1 = read_array(in, "b1");
    m.w2 = read_array(in, "w2");
    m.b2 = read_array(in, "b2");
    m.w3 = read_array(in, "w3");
    m.b3 = read_array(in, "b3");
    validate_model(m);
    return m;
}

}  // namespace wrnn::net
