#include "jpr/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jpr {

namespace {

struct LineFit {
    double intercept;  // value at the first abscissa of the fitted range
    double slope;
};

// Least-squares line through (0, ys[from]), (1, ys[from+1]), ...
LineFit fit_line(std::span<const double> ys, std::size_t from, std::size_t count) {
    if (count == 1) return {ys[from], 0.0};
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double x = static_cast<double>(i);
        double y = ys[from + i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(count);
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    return {intercept, slope};
}

}  // namespace

Decomposition classical_decompose(const TimeSeries& series, std::size_t period) {
    const std::size_t n = series.length();
    if (period < 2) fail(Errc::period_invalid, "classical_decompose", "period must be >= 2");
    if (n < 2 * period)
        fail(Errc::series_too_short, "classical_decompose",
             "need length >= 2*period = " + std::to_string(2 * period));

    const std::vector<double>& xs = series.values();
    const std::size_t m = period;
    const bool even = (m % 2 == 0);
    const std::size_t half = even ? m / 2 : (m - 1) / 2;

    // Centered moving average on the interior; 2xm average for even periods.
    std::vector<double> trend(n, 0.0);
    const std::size_t first = half;
    const std::size_t last = n - 1 - half;  // inclusive
    for (std::size_t t = first; t <= last; ++t) {
        double sum = 0.0;
        if (even) {
            // Weights 1/(2m) at the edges, 1/m inside, window size m+1.
            sum += 0.5 * xs[t - half] + 0.5 * xs[t + half];
            for (std::size_t j = t - half + 1; j < t + half; ++j) sum += xs[j];
        } else {
            for (std::size_t j = t - half; j <= t + half; ++j) sum += xs[j];
        }
        trend[t] = sum / static_cast<double>(m);
    }

    // Fill both ends by extending a line fitted to the nearest `period`
    // interior trend values.
    const std::size_t interior = last - first + 1;
    const std::size_t fit_len = std::min(m, interior);
    {
        LineFit head = fit_line(trend, first, fit_len);
        for (std::size_t t = 0; t < first; ++t)
            trend[t] = head.intercept +
                       head.slope * (static_cast<double>(t) - static_cast<double>(first));
        LineFit tail = fit_line(trend, last + 1 - fit_len, fit_len);
        for (std::size_t t = last + 1; t < n; ++t)
            trend[t] = tail.intercept + tail.slope * (static_cast<double>(t) -
                                                      static_cast<double>(last + 1 - fit_len));
    }

    // Per-phase means of the detrended series, normalized to zero mean.
    std::vector<double> phase_sum(m, 0.0);
    std::vector<std::size_t> phase_count(m, 0);
    for (std::size_t t = 0; t < n; ++t) {
        phase_sum[t % m] += xs[t] - trend[t];
        ++phase_count[t % m];
    }
    std::vector<double> phase_mean(m);
    double grand = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        phase_mean[p] = phase_sum[p] / static_cast<double>(phase_count[p]);
        grand += phase_mean[p];
    }
    grand /= static_cast<double>(m);
    for (double& v : phase_mean) v -= grand;

    Decomposition result;
    result.period = m;
    result.trend = std::move(trend);
    result.seasonal.resize(n);
    result.remainder.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        result.seasonal[t] = phase_mean[t % m];
        result.remainder[t] = xs[t] - result.trend[t] - result.seasonal[t];
    }
    return result;
}

TimeSeries recompose(const Decomposition& decomposition,
                     std::span<const double> new_remainder, std::size_t extension,
                     std::size_t trend_slope_window) {
    const std::size_t n = decomposition.length();
    const std::size_t m = decomposition.period;
    if (new_remainder.size() != n + extension)
        fail(Errc::length_mismatch, "recompose",
             "remainder must have length " + std::to_string(n + extension));

    std::size_t window = trend_slope_window == 0 ? m : trend_slope_window;
    window = std::clamp<std::size_t>(window, 2, n);
    const double slope = fit_line(decomposition.trend, n - window, window).slope;
    const double anchor = decomposition.trend[n - 1];

    std::vector<double> out(n + extension);
    for (std::size_t t = 0; t < n + extension; ++t) {
        double trend = t < n ? decomposition.trend[t]
                             : anchor + slope * static_cast<double>(t - (n - 1));
        out[t] = trend + decomposition.seasonal[t % m] + new_remainder[t];
    }
    return TimeSeries(std::move(out));
}

}  // namespace jpr
