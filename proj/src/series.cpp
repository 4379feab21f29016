#include "jpr/series.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace jpr {

TimeSeries::TimeSeries(std::vector<double> values, std::optional<std::size_t> period)
    : values_(std::move(values)), period_(period) {
    if (values_.empty()) fail(Errc::empty_series, "TimeSeries", "length must be >= 1");
    for (double v : values_) {
        if (!std::isfinite(v))
            fail(Errc::non_finite_value, "TimeSeries", "values must be finite");
    }
    if (period_) {
        if (*period_ < 2 || *period_ > values_.size() / 2)
            fail(Errc::period_invalid, "TimeSeries",
                 "period must satisfy 2 <= period <= length/2");
    }
}

TimeSeries TimeSeries::slice(std::size_t offset, std::size_t count) const {
    if (offset + count > values_.size())
        fail(Errc::length_mismatch, "TimeSeries::slice", "slice exceeds series length");
    std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                            values_.begin() + static_cast<std::ptrdiff_t>(offset + count));
    std::optional<std::size_t> p = period_;
    if (p && (*p < 2 || *p > count / 2)) p.reset();
    return TimeSeries(std::move(out), p);
}

SquareMatrix::SquareMatrix(std::size_t order)
    : order_(order), entries_(order * order, 0.0) {
    if (order == 0) fail(Errc::invalid_argument, "SquareMatrix", "order must be positive");
}

SquareMatrix::SquareMatrix(std::size_t order, std::vector<double> entries)
    : order_(order), entries_(std::move(entries)) {
    if (order == 0) fail(Errc::invalid_argument, "SquareMatrix", "order must be positive");
    if (entries_.size() != order * order)
        fail(Errc::length_mismatch, "SquareMatrix",
             "expected " + std::to_string(order * order) + " entries");
    for (double v : entries_) {
        if (!std::isfinite(v))
            fail(Errc::non_finite_value, "SquareMatrix", "entries must be finite");
    }
}

SquareMatrix SquareMatrix::identity(std::size_t order) {
    SquareMatrix m(order);
    for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
    return m;
}

double SquareMatrix::max_abs() const noexcept {
    double result = 0.0;
    for (double v : entries_) result = std::max(result, std::abs(v));
    return result;
}

double mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    double m = mean(xs);
    double sum = 0.0;
    for (double x : xs) sum += (x - m) * (x - m);
    return sum / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

}  // namespace jpr
