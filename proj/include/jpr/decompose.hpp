#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jpr/series.hpp"

namespace jpr {

/// Additive split of a series: trend + seasonal + remainder reconstructs the
/// source exactly; seasonal is period-periodic and averages to zero over a
/// full period.
struct Decomposition {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> remainder;
    std::size_t period = 0;

    std::size_t length() const noexcept { return trend.size(); }
};

/// Classical moving-average decomposition. The trend is a centered moving
/// average of window `period` (even periods use the 2xm average) with linear
/// extrapolation over the nearest `period` fitted points at both ends; the
/// seasonal component is the zero-mean per-phase average of the detrended
/// series, tiled over the full length.
Decomposition classical_decompose(const TimeSeries& series, std::size_t period);

/// Rebuilds a series of length T+extension from the decomposition and a new
/// remainder: the trend continues linearly with the least-squares slope of
/// its last trend_slope_window points, the seasonal component continues
/// periodically. trend_slope_window == 0 selects one period.
TimeSeries recompose(const Decomposition& decomposition,
                     std::span<const double> new_remainder, std::size_t extension,
                     std::size_t trend_slope_window = 0);

}  // namespace jpr
