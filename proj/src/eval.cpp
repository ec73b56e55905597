#include "wrnn/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wrnn::eval {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

}  // namespace

double rmse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.size() != predicted.size())
        fail("rmse: length mismatch (" + std::to_string(actual.size()) + " vs " +
             std::to_string(predicted.size()) + ")");
    if (actual.empty())
        fail("rmse: empty input");
    double ss = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

double relative_error(double rmse_value, const std::vector<double>& actual) {
    if (actual.empty())
        fail("relative_error: empty actual sequence");
    double mean = 0.0;
    for (double v : actual)
        mean += v;
    mean /= static_cast<double>(actual.size());
    if (!(mean > 0.0))
        fail("relative_error: mean(actual) must be positive");
    return rmse_value / mean;
}

std::pair<ingest::TimeSeries, ingest::TimeSeries>
split_series(const ingest::TimeSeries& series, std::size_t holdout) {
    if (holdout >= series.values.size())
        fail("split_series: holdout " + std::to_string(holdout) +
             " >= series length " + std::to_string(series.values.size()));
    const std::size_t train_n = series.values.size() - holdout;
    ingest::TimeSeries train, test;
    train.start_time = series.start_time;
    train.step_seconds = series.step_seconds;
    train.values.assign(series.values.begin(),
                        series.values.begin() + static_cast<std::ptrdiff_t>(train_n));
    test.start_time = series.start_time +
                      static_cast<std::int64_t>(train_n) * series.step_seconds;
    test.step_seconds = series.step_seconds;
    test.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(train_n),
                       series.values.end());
    return {std::move(train), std::move(test)};
}

ForecastReport make_report(int horizon, std::vector<std::size_t> hours,
                           std::vector<double> actual, std::vector<double> predicted) {
    if (hours.size() != actual.size() || actual.size() != predicted.size())
        fail("make_report: hours/actual/predicted lengths differ");
    ForecastReport report;
    report.horizon = horizon;
    report.hours = std::move(hours);
    report.actual = std::move(actual);
    report.predicted = std::move(predicted);
    report.rmse = rmse(report.actual, report.predicted);
    report.relative_error = relative_error(report.rmse, report.actual);
    return report;
}

void emit_plot_data(const ForecastReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail("cannot write plot CSV: " + path);
    out << "hour,actual,predicted,abs_error\n";
    char buf[160];
    for (std::size_t i = 0; i < report.actual.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", report.hours[i],
                      report.actual[i], report.predicted[i],
                      std::abs(report.actual[i] - report.predicted[i]));
        out << buf;
    }
    if (!out)
        fail("write failed: " + path);
}

CapacityPlan recommend_capacity(const ForecastReport& report, double headroom) {
    if (headroom < 0.0)
        fail("recommend_capacity: headroom must be >= 0");
    CapacityPlan plan;
    plan.headroom = headroom;
    plan.hours = report.hours;
    plan.capacity.reserve(report.predicted.size());
    for (double p : report.predicted) {
        // Shave accumulated representation error (e.g. 100 * 1.1 lands one
        // ulp above 110) so integral products do not get bumped a full unit.
        const double raw = std::max(p, 0.0) * (1.0 + headroom);
        plan.capacity.push_back(std::ceil(raw * (1.0 - 1e-12)));
    }
    return plan;
}

void emit_capacity_csv(const CapacityPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail("cannot write capacity CSV: " + path);
    out << "hour,capacity\n";
    char buf[64];
    for (std::size_t i = 0; i < plan.capacity.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.0f\n", plan.hours[i], plan.capacity[i]);
        out << buf;
    }
    if (!out)
        fail("write failed: " + path);
}

}  // namespace wrnn::eval
