#pragma once

#include <string>
#include <vector>

#include "jpr/forecast.hpp"
#include "jpr/regions.hpp"
#include "jpr/series.hpp"

namespace jpr {

/// Shortest round-trip decimal form of a double ("inf"/"-inf" for infinities).
std::string format_double(double value);

/// Reads a series CSV with header `value` or `t,value`. Missing observations
/// (empty or NA fields) are rejected unless impute_neighbor_mean is set, in
/// which case each one becomes the average of its nearest present neighbors.
std::vector<double> read_series_csv(const std::string& path,
                                    bool impute_neighbor_mean = false);

void write_series_csv(const std::string& path, const TimeSeries& series);

/// Region CSV: header `h,lower,upper,point`, one row per horizon.
void write_region_csv(const std::string& path, const JointRegion& region,
                      const PathForecast& path_forecast);

/// Forecast CSV: header `h,point`.
void write_forecast_csv(const std::string& path, const PathForecast& forecast);

/// Flat `key = value` config lines; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path);

}  // namespace jpr
