#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wrnn/ingest.hpp"

// Error metrics, train/test splitting, plot-data emission and the
// capacity-recommendation consumer of forecasts.

namespace wrnn::eval {

// Predicted vs actual values over an evaluation window, in requests/hour.
// hours[i] is the hour offset of pair i from the start of the source series.
struct ForecastReport {
    int horizon = 0;
    std::vector<std::size_t> hours;
    std::vector<double> actual;
    std::vector<double> predicted;
    double rmse = 0.0;
    double relative_error = 0.0;  // rmse / mean(actual)
};

struct CapacityPlan {
    std::vector<std::size_t> hours;
    std::vector<double> capacity;  // integral values, requests/hour
    double headroom = 0.0;
};

// sqrt(mean((actual - predicted)^2)); throws on length mismatch or empty.
double rmse(const std::vector<double>& actual, const std::vector<double>& predicted);

// rmse / mean(actual); throws unless mean(actual) > 0.
double relative_error(double rmse_value, const std::vector<double>& actual);

// Contiguous suffix of holdout samples becomes the test series; the prefix
// is the training series.  holdout == 0 yields an empty test series;
// holdout >= length throws.
std::pair<ingest::TimeSeries, ingest::TimeSeries>
split_series(const ingest::TimeSeries& series, std::size_t holdout);

// Assembles a report and fills in both error metrics.
ForecastReport make_report(int horizon, std::vector<std::size_t> hours,
                           std::vector<double> actual, std::vector<double> predicted);

// CSV `hour,actual,predicted,abs_error`, one row per pair.
void emit_plot_data(const ForecastReport& report, const std::string& path);

// Per-hour capacity = ceil(predicted * (1 + headroom)), never below zero.
CapacityPlan recommend_capacity(const ForecastReport& report, double headroom);

// CSV `hour,capacity`.
void emit_capacity_csv(const CapacityPlan& plan, const std::string& path);

}  // namespace wrnn::eval
