#include "jpr/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jpr {

namespace {

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool is_missing(const std::string& field) {
    return field.empty() || field == "NA" || field == "nan" || field == "NaN";
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

std::vector<double> read_series_csv(const std::string& path, bool impute_neighbor_mean) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "read_series_csv", "cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        fail(Errc::parse_error, "read_series_csv", "empty file " + path);
    ++line_no;
    line = strip_cr(line);
    bool two_column;
    if (line == "value") {
        two_column = false;
    } else if (line == "t,value") {
        two_column = true;
    } else {
        fail(Errc::parse_error, "read_series_csv",
             "line 1: expected header 'value' or 't,value'");
    }

    std::vector<double> values;
    std::vector<std::size_t> missing;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::string field = line;
        if (two_column) {
            auto comma = line.find(',');
            if (comma == std::string::npos)
                fail(Errc::parse_error, "read_series_csv",
                     "line " + std::to_string(line_no) + ": expected 2 fields");
            field = line.substr(comma + 1);
        }
        if (is_missing(field)) {
            if (!impute_neighbor_mean)
                fail(Errc::parse_error, "read_series_csv",
                     "line " + std::to_string(line_no) + ": missing value");
            missing.push_back(values.size());
            values.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double v;
        if (!parse_double(field, v))
            fail(Errc::parse_error, "read_series_csv",
                 "line " + std::to_string(line_no) + ": malformed value '" + field + "'");
        values.push_back(v);
    }

    // Neighbor-mean imputation: average of the nearest present observations
    // on each side (single-sided at the boundaries).
    for (std::size_t idx : missing) {
        std::ptrdiff_t prev = static_cast<std::ptrdiff_t>(idx) - 1;
        while (prev >= 0 && std::isnan(values[static_cast<std::size_t>(prev)])) --prev;
        std::size_t next = idx + 1;
        while (next < values.size() && std::isnan(values[next])) ++next;
        bool has_prev = prev >= 0;
        bool has_next = next < values.size();
        if (!has_prev && !has_next)
            fail(Errc::parse_error, "read_series_csv", "no observed values to impute from");
        if (has_prev && has_next)
            values[idx] = 0.5 * (values[static_cast<std::size_t>(prev)] + values[next]);
        else
            values[idx] = has_prev ? values[static_cast<std::size_t>(prev)] : values[next];
    }
    return values;
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "write_series_csv", "cannot open " + path);
    out << "value\n";
    for (double v : series.values()) out << format_double(v) << "\n";
    if (!out) fail(Errc::io_error, "write_series_csv", "write failed for " + path);
}

void write_region_csv(const std::string& path, const JointRegion& region,
                      const PathForecast& path_forecast) {
    if (path_forecast.horizon != region.horizon)
        fail(Errc::length_mismatch, "write_region_csv",
             "forecast horizon must match the region");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "write_region_csv", "cannot open " + path);
    out << "h,lower,upper,point\n";
    for (std::size_t h = 0; h < region.horizon; ++h)
        out << (h + 1) << ',' << format_double(region.lower[h]) << ','
            << format_double(region.upper[h]) << ','
            << format_double(path_forecast.point[h]) << "\n";
    if (!out) fail(Errc::io_error, "write_region_csv", "write failed for " + path);
}

void write_forecast_csv(const std::string& path, const PathForecast& forecast) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "write_forecast_csv", "cannot open " + path);
    out << "h,point\n";
    for (std::size_t h = 0; h < forecast.horizon; ++h)
        out << (h + 1) << ',' << format_double(forecast.point[h]) << "\n";
    if (!out) fail(Errc::io_error, "write_forecast_csv", "write failed for " + path);
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "read_config_file", "cannot open " + path);

    auto trim = [](std::string s) {
        auto not_space = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
        s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
        return s;
    };

    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(Errc::parse_error, "read_config_file",
                 "line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(Errc::parse_error, "read_config_file",
                 "line " + std::to_string(line_no) + ": empty key or value");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

}  // namespace jpr
