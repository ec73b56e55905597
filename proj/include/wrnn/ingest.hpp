#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Loading of hourly request-count series from CSV files and from Wikimedia
// pagecounts-raw dump files, plus z-score normalization.

namespace wrnn::ingest {

// One line of a pagecounts-raw hourly dump.
struct PageRecord {
    std::string project;
    std::string title;
    std::uint64_t views = 0;
    std::uint64_t bytes = 0;
};

// Uniformly sampled scalar series.  start_time is Unix seconds (UTC);
// sample k is at start_time + k * step_seconds.
struct TimeSeries {
    std::int64_t start_time = 0;
    std::int64_t step_seconds = 3600;
    std::vector<double> values;
};

// z-score statistics of a training series, reused frozen on test data.
struct NormStats {
    double mean = 0.0;
    double std = 1.0;
};

// Parses `<project> <title> <views> <bytes>`; line_no is only used in error
// messages.  Throws std::runtime_error on malformed input.
PageRecord parse_pagecounts_line(const std::string& line, std::size_t line_no = 0);

// Sum of views over an hourly file's records.  Empty input sums to zero.
double aggregate_hour(const std::vector<PageRecord>& records);

// Parses "YYYY-MM-DDTHH:MM:SSZ" to Unix seconds; inverse below.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t t);

// Line-oriented `timestamp,count` with ISO-8601 UTC timestamps, strictly
// increasing at exactly one-hour spacing.  An optional header line is
// detected by a non-numeric second field.  Gaps, duplicates or non-monotone
// timestamps raise std::runtime_error naming the offending timestamp.
TimeSeries load_csv(const std::string& path);
void save_csv(const TimeSeries& series, const std::string& path);

// Reads every `pagecounts-YYYYMMDD-HH0000` file in a directory, aggregates
// each to an hourly total, and assembles the hourly series ordered by the
// filename timestamp.  A missing hour raises std::runtime_error naming it.
TimeSeries ingest_pagecounts_dir(const std::string& dir);

// z-score with the sample (n-1) standard deviation.  Throws on series
// shorter than 2 or with zero variance.
std::pair<TimeSeries, NormStats> standardize(const TimeSeries& series);

double standardize_value(double value, const NormStats& stats);
double destandardize(double value, const NormStats& stats);

}  // namespace wrnn::ingest
