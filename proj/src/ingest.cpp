#include "wrnn/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wrnn::ingest {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

bool parse_u64(const std::string& field, std::uint64_t& out) {
    if (field.empty())
        return false;
    out = 0;
    for (char c : field) {
        if (c < '0' || c > '9')
            return false;
        out = out * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return true;
}

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool all_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

PageRecord parse_pagecounts_line(const std::string& line, std::size_t line_no) {
    std::istringstream in(line);
    std::string project, title, views_s, bytes_s, extra;
    if (!(in >> project >> title >> views_s >> bytes_s) || (in >> extra))
        fail("pagecounts line " + std::to_string(line_no) +
             ": expected 4 space-separated fields: " + line);
    PageRecord rec;
    rec.project = project;
    rec.title = title;
    if (!parse_u64(views_s, rec.views))
        fail("pagecounts line " + std::to_string(line_no) +
             ": views is not a base-10 integer: " + views_s);
    if (!parse_u64(bytes_s, rec.bytes))
        fail("pagecounts line " + std::to_string(line_no) +
             ": bytes is not a base-10 integer: " + bytes_s);
    return rec;
}

double aggregate_hour(const std::vector<PageRecord>& records) {
    double total = 0.0;
    for (const PageRecord& rec : records)
        total += static_cast<double>(rec.views);
    return total;
}

std::int64_t parse_iso8601_utc(const std::string& text) {
    int y, mo, d, h, mi, s;
    char z = '\0';
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c",
                    &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
        z != 'Z')
        fail("malformed ISO-8601 UTC timestamp (want YYYY-MM-DDTHH:MM:SSZ): " + text);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
        mi > 59 || s < 0 || s > 60)
        fail("timestamp field out of range: " + text);
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) *
               86400 +
           h * 3600 + mi * 60 + s;
}

std::string format_iso8601_utc(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    std::int64_t y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), mo, d,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

TimeSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open series CSV: " + path);
    TimeSeries series;
    std::string line;
    std::size_t line_no = 0;
    std::int64_t prev_time = 0;
    bool have_prev = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            fail(path + ":" + std::to_string(line_no) + ": expected `timestamp,count`");
        std::string ts = line.substr(0, comma);
        std::string count = line.substr(comma + 1);
        if (line_no == 1) {
            // Optional header: second field non-numeric.
            bool numeric = !count.empty() &&
                           count.find_first_not_of("0123456789+-.eE") == std::string::npos &&
                           (std::isdigit(static_cast<unsigned char>(count[0])) ||
                            count[0] == '+' || count[0] == '-' || count[0] == '.');
            if (!numeric)
                continue;
        }
        std::int64_t t = parse_iso8601_utc(ts);
        if (have_prev) {
            if (t == prev_time)
                fail(path + ": duplicate timestamp " + ts);
            if (t < prev_time)
                fail(path + ": non-monotone timestamp " + ts);
            if (t - prev_time != series.step_seconds)
                fail(path + ": gap before " + ts + " (expected " +
                     format_iso8601_utc(prev_time + series.step_seconds) + ")");
        } else {
            series.start_time = t;
        }
        std::size_t used = 0;
        double value;
        try {
            value = std::stod(count, &used);
        } catch (const std::exception&) {
            fail(path + ":" + std::to_string(line_no) + ": bad count: " + count);
        }
        if (used != count.size())
            fail(path + ":" + std::to_string(line_no) + ": bad count: " + count);
        series.values.push_back(value);
        prev_time = t;
        have_prev = true;
    }
    if (series.values.empty())
        fail(path + ": no data rows");
    return series;
}

void save_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail("cannot write series CSV: " + path);
    out << "timestamp,count\n";
    char buf[64];
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", series.values[k]);
        out << format_iso8601_utc(series.start_time +
                                  static_cast<std::int64_t>(k) * series.step_seconds)
            << ',' << buf << '\n';
    }
    if (!out)
        fail("write failed: " + path);
}

TimeSeries ingest_pagecounts_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::int64_t, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        // pagecounts-YYYYMMDD-HH0000
        if (name.size() != 26 || name.rfind("pagecounts-", 0) != 0)
            continue;
        std::string date = name.substr(11, 8), hour = name.substr(20, 6);
        if (name[19] != '-' || !all_digits(date) || !all_digits(hour) ||
            hour.substr(2) != "0000")
            continue;
        std::int64_t t = days_from_civil(std::stoll(date.substr(0, 4)),
                                         std::stoul(date.substr(4, 2)),
                                         std::stoul(date.substr(6, 2))) *
                             86400 +
                         std::stoll(hour.substr(0, 2)) * 3600;
        files.emplace_back(t, entry.path());
    }
    if (files.empty())
        fail("no pagecounts-YYYYMMDD-HH0000 files in " + dir);
    std::sort(files.begin(), files.end());

    TimeSeries series;
    series.start_time = files.front().first;
    for (std::size_t k = 0; k < files.size(); ++k) {
        std::int64_t expected = series.start_time +
                                static_cast<std::int64_t>(k) * series.step_seconds;
        if (files[k].first != expected)
            fail("missing hourly dump for " + format_iso8601_utc(expected));
        std::ifstream in(files[k].second);
        if (!in)
            fail("cannot open " + files[k].second.string());
        std::vector<PageRecord> records;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            records.push_back(parse_pagecounts_line(line, line_no));
        }
        series.values.push_back(aggregate_hour(records));
    }
    return series;
}

std::pair<TimeSeries, NormStats> standardize(const TimeSeries& series) {
    const std::size_t n = series.values.size();
    if (n < 2)
        fail("standardize needs at least 2 samples");
    double mean = 0.0;
    for (double v : series.values)
        mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : series.values)
        ss += (v - mean) * (v - mean);
    double std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    if (std_dev == 0.0)
        fail("standardize: series is constant (std = 0)");
    NormStats stats{mean, std_dev};
    TimeSeries out = series;
    for (double& v : out.values)
        v = (v - mean) / std_dev;
    return {std::move(out), stats};
}

double standardize_value(double value, const NormStats& stats) {
    return (value - stats.mean) / stats.std;
}

double destandardize(double value, const NormStats& stats) {
    return value * stats.std + stats.mean;
}

}  // namespace wrnn::ingest
