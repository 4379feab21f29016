#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jpr/errors.hpp"

namespace jpr {

/// Ordered real-valued observations at a fixed sampling rate. All values are
/// finite; an optional period records the seasonality m with 2 <= m <= T/2.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values,
                        std::optional<std::size_t> period = std::nullopt);

    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> view() const noexcept { return values_; }
    std::size_t length() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const noexcept { return values_[t]; }
    std::optional<std::size_t> period() const noexcept { return period_; }

    TimeSeries slice(std::size_t offset, std::size_t count) const;

private:
    std::vector<double> values_;
    std::optional<std::size_t> period_;
};

/// Correlation coefficients indexed by lag 1..L, each in [-1, 1].
struct CorrelationSequence {
    std::vector<double> coefficients;

    std::size_t max_lag() const noexcept { return coefficients.size(); }
    double at_lag(std::size_t k) const { return coefficients.at(k - 1); }
};

/// Dense row-major square matrix, used for covariance and Cholesky factors.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t order);
    SquareMatrix(std::size_t order, std::vector<double> entries);

    static SquareMatrix identity(std::size_t order);

    std::size_t order() const noexcept { return order_; }
    double& operator()(std::size_t row, std::size_t col) noexcept {
        return entries_[row * order_ + col];
    }
    double operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * order_ + col];
    }
    const std::vector<double>& entries() const noexcept { return entries_; }

    double max_abs() const noexcept;

private:
    std::size_t order_;
    std::vector<double> entries_;
};

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);   // divisor n-1
double sample_stddev(std::span<const double> xs);

}  // namespace jpr
