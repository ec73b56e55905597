#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wrnn/dwt.hpp"
#include "wrnn/eval.hpp"
#include "wrnn/ingest.hpp"
#include "wrnn/lifting.hpp"
#include "wrnn/net.hpp"

namespace {

// Everything a pipeline run needs; config-file keys mirror these fields.
struct RunConfig {
    std::string input;
    std::string model = "model.wrnn";
    std::string output;
    std::size_t levels = 4;
    int horizon = 6;
    double initial_learning_rate = 0.01;
    double momentum = 0.9;
    double lr_increase = 1.05;
    double lr_decrease = 0.7;
    double max_error_growth = 1.04;
    std::size_t epochs = 1000;
    std::uint64_t seed = 1;
    double train_fraction = 1.0;
    double target_mse = 0.0;
    std::size_t holdout_hours = 0;
    double headroom = 0.0;
    std::string method = "filterbank";
    std::string stage = "linear";
    std::string extension = "symmetric";
};

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return "";
    const std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// Line-oriented `key = value`; `#` starts a comment.
void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected `key = value`");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto take = [&kv](const char* key, auto& field) {
        auto it = kv.find(key);
        if (it == kv.end())
            return;
        std::istringstream is(it->second);
        is >> field;
        if (is.fail())
            throw std::runtime_error(std::string("config: bad value for `") + key +
                                     "`: " + it->second);
        kv.erase(it);
    };
    take("input", cfg.input);
    take("model", cfg.model);
    take("output", cfg.output);
    take("levels", cfg.levels);
    take("horizon", cfg.horizon);
    take("initial_learning_rate", cfg.initial_learning_rate);
    take("momentum", cfg.momentum);
    take("lr_increase", cfg.lr_increase);
    take("lr_decrease", cfg.lr_decrease);
    take("max_error_growth", cfg.max_error_growth);
    take("epochs", cfg.epochs);
    take("seed", cfg.seed);
    take("train_fraction", cfg.train_fraction);
    take("target_mse", cfg.target_mse);
    take("holdout_hours", cfg.holdout_hours);
    take("headroom", cfg.headroom);
    take("method", cfg.method);
    take("stage", cfg.stage);
    take("extension", cfg.extension);
    if (!kv.empty())
        throw std::runtime_error("config: unknown key `" + kv.begin()->first + "`");
}

wrnn::net::WrnnTopology make_topology(const RunConfig& cfg) {
    wrnn::net::WrnnTopology topo;
    topo.wavelet_levels = cfg.levels;
    topo.horizon = cfg.horizon;
    return topo;
}

wrnn::net::TrainConfig make_train_config(const RunConfig& cfg) {
    wrnn::net::TrainConfig tc;
    tc.initial_learning_rate = cfg.initial_learning_rate;
    tc.momentum = cfg.momentum;
    tc.lr_increase = cfg.lr_increase;
    tc.lr_decrease = cfg.lr_decrease;
    tc.max_error_growth = cfg.max_error_growth;
    tc.epochs = cfg.epochs;
    tc.seed = cfg.seed;
    tc.train_fraction = cfg.train_fraction;
    tc.target_mse = cfg.target_mse;
    return tc;
}

// Predictions whose target hour falls in the holdout suffix (or everywhere
// when holdout is 0), paired with the actual values.
wrnn::eval::ForecastReport evaluate_holdout(const wrnn::net::WrnnModel& model,
                                            const wrnn::ingest::TimeSeries& series,
                                            std::size_t holdout, bool closed_loop) {
    const auto predictions =
        wrnn::net::predict_series(model, series, model.topology.horizon, closed_loop);
    if (predictions.empty())
        throw std::runtime_error("series too short to produce any prediction");
    const std::size_t begin =
        holdout == 0 ? 0 : series.values.size() - holdout;
    std::vector<std::size_t> hours;
    std::vector<double> actual, predicted;
    for (const auto& [hour, value] : predictions) {
        if (hour < begin)
            continue;
        hours.push_back(hour);
        actual.push_back(series.values[hour]);
        predicted.push_back(value);
    }
    if (hours.empty())
        throw std::runtime_error("no prediction falls inside the holdout window");
    return wrnn::eval::make_report(model.topology.horizon, std::move(hours),
                                   std::move(actual), std::move(predicted));
}

void write_curve_csv(const wrnn::net::TrainReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write curve CSV: " + path);
    out << "epoch,mse\n";
    char buf[64];
    for (std::size_t e = 0; e < report.mse_curve.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", e + 1, report.mse_curve[e]);
        out << buf;
    }
}

void write_lifting_csv(const wrnn::lifting::LiftingPyramid& pyr,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write coefficients CSV: " + path);
    const std::size_t M = pyr.details.size();
    std::size_t rows = pyr.approx.size();
    for (const auto& d : pyr.details)
        rows = std::max(rows, d.size());
    for (std::size_t c = 0; c < M; ++c)
        out << 'd' << (c + 1) << ',';
    out << 'a' << M << '\n';
    char buf[64];
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t c = 0; c < M; ++c) {
            if (t < pyr.details[c].size()) {
                std::snprintf(buf, sizeof buf, "%.17g", pyr.details[c][t]);
                out << buf;
            }
            out << ',';
        }
        if (t < pyr.approx.size()) {
            std::snprintf(buf, sizeof buf, "%.17g", pyr.approx[t]);
            out << buf;
        }
        out << '\n';
    }
}

int cmd_ingest(const RunConfig& cfg, const std::string& src_dir,
               const std::string& csv) {
    wrnn::ingest::TimeSeries series;
    if (!src_dir.empty())
        series = wrnn::ingest::ingest_pagecounts_dir(src_dir);
    else if (!csv.empty())
        series = wrnn::ingest::load_csv(csv);
    else
        throw std::runtime_error("ingest: give --src-dir or --csv");
    wrnn::ingest::save_csv(series, cfg.output);
    std::printf("wrote %zu hourly samples to %s\n", series.values.size(),
                cfg.output.c_str());
    return 0;
}

int cmd_decompose(const RunConfig& cfg, bool verify) {
    const wrnn::ingest::TimeSeries series = wrnn::ingest::load_csv(cfg.input);
    if (cfg.method == "filterbank") {
        const auto ext = wrnn::dwt::extension_from_name(cfg.extension);
        const auto bank = wrnn::dwt::bior37_bank(ext);
        const auto coeffs =
            wrnn::dwt::decompose_undecimated(series.values, cfg.levels, bank);
        wrnn::dwt::save_coeffs_csv(coeffs, cfg.output);
        std::printf("wrote %zu coefficient rows (%zu levels) to %s\n",
                    coeffs.source_length, coeffs.levels, cfg.output.c_str());
        if (verify) {
            const auto pyr =
                wrnn::dwt::decompose_decimated(series.values, cfg.levels, bank);
            const auto rec = wrnn::dwt::reconstruct(pyr, bank);
            double residual = 0.0;
            for (std::size_t i = 0; i < series.values.size(); ++i)
                residual = std::max(residual, std::abs(rec[i] - series.values[i]));
            std::printf("max reconstruction residual: %.3e\n", residual);
            if (!(residual < 1e-8))
                throw std::runtime_error("reconstruction residual exceeds 1e-8");
        }
    } else if (cfg.method == "lifting") {
        const auto stage = wrnn::lifting::stage_by_name(cfg.stage);
        const auto pyr =
            wrnn::lifting::lift_multilevel(series.values, stage, cfg.levels);
        write_lifting_csv(pyr, cfg.output);
        std::printf("wrote %zu-level lifting decomposition to %s\n",
                    pyr.details.size(), cfg.output.c_str());
        if (verify) {
            const auto rec = wrnn::lifting::inverse_multilevel(pyr, stage);
            double residual = 0.0;
            for (std::size_t i = 0; i < series.values.size(); ++i)
                residual = std::max(residual, std::abs(rec[i] - series.values[i]));
            std::printf("max reconstruction residual: %.3e\n", residual);
            if (!(residual < 1e-8))
                throw std::runtime_error("reconstruction residual exceeds 1e-8");
        }
    } else {
        throw std::runtime_error("decompose: method must be filterbank or lifting");
    }
    return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& curve_out) {
    const wrnn::ingest::TimeSeries series = wrnn::ingest::load_csv(cfg.input);
    wrnn::ingest::TimeSeries train_series = series;
    if (cfg.holdout_hours > 0)
        train_series = wrnn::eval::split_series(series, cfg.holdout_hours).first;

    const auto [model, report] =
        wrnn::net::train(train_series, make_train_config(cfg), make_topology(cfg));
    wrnn::net::save_model(model, cfg.model);
    if (!curve_out.empty())
        write_curve_csv(report, curve_out);
    std::printf("trained %zu epochs (%s), final mse %.6g; model written to %s\n",
                report.final_epoch, report.stopping_reason.c_str(),
                report.mse_curve.empty() ? 0.0 : report.mse_curve.back(),
                cfg.model.c_str());
    return 0;
}

int cmd_predict(const RunConfig& cfg, bool closed_loop) {
    const auto model = wrnn::net::load_model(cfg.model);
    const auto series = wrnn::ingest::load_csv(cfg.input);
    const auto predictions = wrnn::net::predict_series(
        model, series, model.topology.horizon, closed_loop);
    std::ofstream out(cfg.output);
    if (!out)
        throw std::runtime_error("cannot write predictions CSV: " + cfg.output);
    out << "hour,predicted\n";
    char buf[64];
    for (const auto& [hour, value] : predictions) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", hour, value);
        out << buf;
    }
    std::printf("wrote %zu predictions to %s\n", predictions.size(),
                cfg.output.c_str());
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& plot_out,
                 bool closed_loop) {
    const auto model = wrnn::net::load_model(cfg.model);
    const auto series = wrnn::ingest::load_csv(cfg.input);
    const auto report =
        evaluate_holdout(model, series, cfg.holdout_hours, closed_loop);

    std::ofstream out(cfg.output);
    if (!out)
        throw std::runtime_error("cannot write report: " + cfg.output);
    char buf[96];
    out << "horizon: " << report.horizon << '\n';
    out << "pairs: " << report.actual.size() << '\n';
    out << "window_start_hour: " << report.hours.front() << '\n';
    out << "window_end_hour: " << report.hours.back() << '\n';
    std::snprintf(buf, sizeof buf, "rmse: %.17g\n", report.rmse);
    out << buf;
    std::snprintf(buf, sizeof buf, "relative_error: %.17g\n", report.relative_error);
    out << buf;
    if (!plot_out.empty())
        wrnn::eval::emit_plot_data(report, plot_out);
    std::printf("rmse %.6g, relative error %.6g over %zu holdout pairs\n",
                report.rmse, report.relative_error, report.actual.size());
    return 0;
}

int cmd_recommend(const RunConfig& cfg, bool closed_loop) {
    const auto model = wrnn::net::load_model(cfg.model);
    const auto series = wrnn::ingest::load_csv(cfg.input);
    const auto report =
        evaluate_holdout(model, series, cfg.holdout_hours, closed_loop);
    const auto plan = wrnn::eval::recommend_capacity(report, cfg.headroom);
    wrnn::eval::emit_capacity_csv(plan, cfg.output);
    std::printf("wrote capacity plan (%zu hours, headroom %.3g) to %s\n",
                plan.capacity.size(), plan.headroom, cfg.output.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // The config file (flag --config, or WRNN_CONFIG) seeds the defaults;
    // command-line flags override it.
    try {
        std::string config_path;
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config")
                config_path = argv[i + 1];
        if (config_path.empty())
            if (const char* env = std::getenv("WRNN_CONFIG"))
                config_path = env;
        if (!config_path.empty())
            apply_config_file(config_path, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"Wavelet-recurrent-network forecaster for hourly request volume"};
    app.set_help_all_flag("--help-all");
    std::string config_path_opt;
    app.add_option("--config", config_path_opt, "Config file (key = value lines)");

    std::string src_dir, csv_in, curve_out, plot_out;
    bool verify = false, closed_loop = false;

    CLI::App* ingest = app.add_subcommand("ingest", "Build an hourly series CSV");
    ingest->add_option("--src-dir", src_dir, "Directory of pagecounts-YYYYMMDD-HH0000 files");
    ingest->add_option("--csv", csv_in, "Existing series CSV to validate and re-emit");
    ingest->add_option("--out", cfg.output, "Output series CSV")->required();

    CLI::App* decompose = app.add_subcommand("decompose", "Wavelet-decompose a series");
    decompose->add_option("--series", cfg.input, "Input series CSV")->required();
    decompose->add_option("--method", cfg.method, "filterbank or lifting");
    decompose->add_option("--stage", cfg.stage, "Lifting stage: haar or linear");
    decompose->add_option("--levels", cfg.levels, "Decomposition levels M");
    decompose->add_option("--extension", cfg.extension, "symmetric, periodic or zero");
    decompose->add_option("--out", cfg.output, "Output coefficients CSV")->required();
    decompose->add_flag("--verify", verify, "Round-trip and print the residual");

    CLI::App* train = app.add_subcommand("train", "Train a forecasting model");
    train->add_option("--series", cfg.input, "Input series CSV")->required();
    train->add_option("--model-out", cfg.model, "Output model file");
    train->add_option("--curve-out", curve_out, "Training-curve CSV");
    train->add_option("--levels", cfg.levels, "Decomposition levels M");
    train->add_option("--horizon", cfg.horizon, "Forecast horizon r (steps)");
    train->add_option("--epochs", cfg.epochs, "Training epochs");
    train->add_option("--seed", cfg.seed, "Random seed");
    train->add_option("--learning-rate", cfg.initial_learning_rate, "Initial learning rate");
    train->add_option("--momentum", cfg.momentum, "Momentum coefficient");
    train->add_option("--lr-increase", cfg.lr_increase, "Learning-rate growth factor");
    train->add_option("--lr-decrease", cfg.lr_decrease, "Learning-rate shrink factor");
    train->add_option("--max-error-growth", cfg.max_error_growth, "MSE growth ratio that rejects an update");
    train->add_option("--train-fraction", cfg.train_fraction, "Leading fraction of the series to train on");
    train->add_option("--target-mse", cfg.target_mse, "Early-stop MSE (0 disables)");
    train->add_option("--holdout", cfg.holdout_hours, "Trailing hours excluded from training");

    CLI::App* predict = app.add_subcommand("predict", "Emit r-step-ahead predictions");
    predict->add_option("--model", cfg.model, "Model file");
    predict->add_option("--series", cfg.input, "Input series CSV")->required();
    predict->add_option("--out", cfg.output, "Output predictions CSV")->required();
    predict->add_flag("--closed-loop", closed_loop, "Feed predictions back into the taps");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions on a holdout suffix");
    evaluate->add_option("--model", cfg.model, "Model file");
    evaluate->add_option("--series", cfg.input, "Input series CSV")->required();
    evaluate->add_option("--holdout", cfg.holdout_hours, "Holdout suffix length (hours)");
    evaluate->add_option("--report", cfg.output, "Output report file")->required();
    evaluate->add_option("--plot", plot_out, "Plot CSV (hour,actual,predicted,abs_error)");
    evaluate->add_flag("--closed-loop", closed_loop, "Feed predictions back into the taps");

    CLI::App* recommend = app.add_subcommand("recommend", "Emit a capacity plan from forecasts");
    recommend->add_option("--model", cfg.model, "Model file");
    recommend->add_option("--series", cfg.input, "Input series CSV")->required();
    recommend->add_option("--holdout", cfg.holdout_hours, "Holdout suffix length (hours)");
    recommend->add_option("--headroom", cfg.headroom, "Fractional capacity headroom (>= 0)");
    recommend->add_option("--out", cfg.output, "Output capacity CSV")->required();
    recommend->add_flag("--closed-loop", closed_loop, "Feed predictions back into the taps");

    // Accept --config after the subcommand name as well.
    for (CLI::App* sub : {ingest, decompose, train, predict, evaluate, recommend})
        sub->fallthrough();

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed())
            return cmd_ingest(cfg, src_dir, csv_in);
        if (decompose->parsed())
            return cmd_decompose(cfg, verify);
        if (train->parsed())
            return cmd_train(cfg, curve_out);
        if (predict->parsed())
            return cmd_predict(cfg, closed_loop);
        if (evaluate->parsed())
            return cmd_evaluate(cfg, plot_out, closed_loop);
        if (recommend->parsed())
            return cmd_recommend(cfg, closed_loop);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
