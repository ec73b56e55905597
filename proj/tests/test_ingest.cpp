#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "wrnn/ingest.hpp"

using namespace wrnn;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("parse_pagecounts_line splits the four fields") {
    const auto rec = ingest::parse_pagecounts_line("en Main_Page 42 123456");
    CHECK(rec.project == "en");
    CHECK(rec.title == "Main_Page");
    CHECK(rec.views == 42);
    CHECK(rec.bytes == 123456);

    const auto zero = ingest::parse_pagecounts_line("en X 0 0");
    CHECK(zero.views == 0);
    CHECK(zero.bytes == 0);
}

TEST_CASE("parse_pagecounts_line rejects malformed lines with the line number") {
    CHECK_THROWS_WITH_AS(ingest::parse_pagecounts_line("en OnlyThreeFields 42", 7),
                         doctest::Contains("line 7"), std::runtime_error);
    CHECK_THROWS_AS(ingest::parse_pagecounts_line("en A 12 34 extra", 1),
                    std::runtime_error);
    CHECK_THROWS_AS(ingest::parse_pagecounts_line("en A twelve 34", 1),
                    std::runtime_error);
    CHECK_THROWS_AS(ingest::parse_pagecounts_line("en A 12 -34", 1),
                    std::runtime_error);
}

TEST_CASE("the ten-line fixture parses to the hand-computed records") {
    std::ifstream in(std::string(WRNN_TEST_DATA_DIR) + "/pagecounts_fixture.txt");
    REQUIRE(in.good());
    std::vector<ingest::PageRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
        records.push_back(ingest::parse_pagecounts_line(line, ++line_no));

    REQUIRE(records.size() == 10);
    const std::uint64_t expected_views[10] = {42, 17, 8, 23, 4, 31, 12, 9, 5, 150};
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(records[i].views == expected_views[i]);
    CHECK(records[0].project == "en");
    CHECK(records[2].title == "Hauptseite");
    CHECK(records[9].bytes == 720550);
    CHECK(ingest::aggregate_hour(records) == 301.0);
}

TEST_CASE("aggregate_hour sums views") {
    CHECK(ingest::aggregate_hour({}) == 0.0);
    CHECK(ingest::aggregate_hour({{"en", "A", 2, 1}, {"de", "B", 3, 1}}) == 5.0);

    std::vector<ingest::PageRecord> many(10000, {"en", "T", 1, 0});
    double oracle = 0.0;
    for (std::size_t i = 0; i < many.size(); ++i)
        oracle += 1.0;
    CHECK(ingest::aggregate_hour(many) == oracle);
}

TEST_CASE("aggregate_hour is permutation-invariant") {
    std::mt19937_64 rng(3);
    std::vector<ingest::PageRecord> records;
    for (int i = 0; i < 200; ++i)
        records.push_back({"p", "t", rng() % 100000, 0});
    const double before = ingest::aggregate_hour(records);
    std::shuffle(records.begin(), records.end(), rng);
    CHECK(ingest::aggregate_hour(records) == before);
}

TEST_CASE("ISO-8601 UTC timestamps round-trip") {
    CHECK(ingest::parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
    CHECK(ingest::parse_iso8601_utc("2012-01-01T00:00:00Z") == 1325376000);
    CHECK(ingest::format_iso8601_utc(1325376000) == "2012-01-01T00:00:00Z");
    for (std::int64_t t : {0L, 1325376000L, 1609459199L, 86399L, 951827696L})
        CHECK(ingest::parse_iso8601_utc(ingest::format_iso8601_utc(t)) == t);
    CHECK_THROWS_AS(ingest::parse_iso8601_utc("2012-01-01 00:00:00"),
                    std::runtime_error);
    CHECK_THROWS_AS(ingest::parse_iso8601_utc("2012-13-01T00:00:00Z"),
                    std::runtime_error);
}

TEST_CASE("load_csv reads hourly rows") {
    const auto path = write_temp(
        "wrnn_series_ok.csv",
        "2012-01-01T00:00:00Z,10\n2012-01-01T01:00:00Z,20\n");
    const auto series = ingest::load_csv(path.string());
    CHECK(series.values == std::vector<double>{10.0, 20.0});
    CHECK(series.start_time == 1325376000);
    CHECK(series.step_seconds == 3600);
}

TEST_CASE("load_csv accepts an optional header and CRLF endings") {
    const auto path = write_temp(
        "wrnn_series_hdr.csv",
        "timestamp,count\r\n2012-01-01T00:00:00Z,1\r\n2012-01-01T01:00:00Z,2\r\n");
    const auto series = ingest::load_csv(path.string());
    CHECK(series.values == std::vector<double>{1.0, 2.0});
}

TEST_CASE("load_csv keeps every row") {
    std::string text;
    for (int k = 0; k < 48; ++k)
        text += ingest::format_iso8601_utc(1325376000 + 3600 * k) + ",7\n";
    const auto path = write_temp("wrnn_series_48.csv", text);
    const auto series = ingest::load_csv(path.string());
    REQUIRE(series.values.size() == 48);
    for (double v : series.values)
        CHECK(v == 7.0);
}

TEST_CASE("load_csv rejects gaps, duplicates and disorder by timestamp") {
    const auto gap = write_temp(
        "wrnn_series_gap.csv",
        "2012-01-01T00:00:00Z,1\n2012-01-01T02:00:00Z,2\n");
    CHECK_THROWS_WITH_AS(ingest::load_csv(gap.string()),
                         doctest::Contains("2012-01-01T02:00:00Z"),
                         std::runtime_error);

    const auto dup = write_temp(
        "wrnn_series_dup.csv",
        "2012-01-01T00:00:00Z,1\n2012-01-01T00:00:00Z,2\n");
    CHECK_THROWS_WITH_AS(ingest::load_csv(dup.string()),
                         doctest::Contains("duplicate"), std::runtime_error);

    const auto rev = write_temp(
        "wrnn_series_rev.csv",
        "2012-01-01T01:00:00Z,1\n2012-01-01T00:00:00Z,2\n");
    CHECK_THROWS_WITH_AS(ingest::load_csv(rev.string()),
                         doctest::Contains("non-monotone"), std::runtime_error);

    CHECK_THROWS_AS(ingest::load_csv("/nonexistent/series.csv"), std::runtime_error);
}

TEST_CASE("save_csv then load_csv round-trips") {
    ingest::TimeSeries series;
    series.start_time = 1325376000;
    series.values = {1.5, 2.25, 3.125, 4.0625};
    const fs::path path = fs::temp_directory_path() / "wrnn_series_rt.csv";
    ingest::save_csv(series, path.string());
    const auto back = ingest::load_csv(path.string());
    CHECK(back.start_time == series.start_time);
    CHECK(back.values == series.values);
}

TEST_CASE("standardize matches the two-point z-score") {
    ingest::TimeSeries series;
    series.values = {1.0, 3.0};
    const auto [normalized, stats] = ingest::standardize(series);
    CHECK(stats.mean == 2.0);
    CHECK(stats.std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(normalized.values[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(normalized.values[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ingest::destandardize(0.0, {2.0, 1.41}) == 2.0);
}

TEST_CASE("standardize output has sample mean 0 and sample std 1") {
    std::mt19937_64 rng(5);
    ingest::TimeSeries series;
    for (int i = 0; i < 1000; ++i)
        series.values.push_back(static_cast<double>(rng() % 100000) / 7.0);
    const auto [normalized, stats] = ingest::standardize(series);

    double mean = 0.0;
    for (double v : normalized.values)
        mean += v;
    mean /= 1000.0;
    double ss = 0.0;
    for (double v : normalized.values)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / 999.0);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(sd - 1.0) < 1e-12);

    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double back = ingest::destandardize(normalized.values[i], stats);
        CHECK(std::abs(back - series.values[i]) <=
              1e-9 * std::max(1.0, std::abs(series.values[i])));
        const double there = ingest::standardize_value(series.values[i], stats);
        CHECK(std::abs(there - normalized.values[i]) <= 1e-9);
    }
}

TEST_CASE("standardize rejects constant and too-short series") {
    ingest::TimeSeries constant;
    constant.values.assign(10, 4.0);
    CHECK_THROWS_AS(ingest::standardize(constant), std::runtime_error);
    ingest::TimeSeries single;
    single.values = {1.0};
    CHECK_THROWS_AS(ingest::standardize(single), std::runtime_error);
}
