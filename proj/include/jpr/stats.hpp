#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jpr/series.hpp"

namespace jpr {

/// Sample autocorrelations r(1..max_lag):
///   r(k) = sum_{t=k+1..n} (x_t - xbar)(x_{t-k} - xbar) / sum_t (x_t - xbar)^2.
/// Rejects constant series (zero denominator) and max_lag >= length.
CorrelationSequence acf(const TimeSeries& series, std::size_t max_lag);

/// Partial autocorrelations via the Durbin-Levinson recursion over acf().
CorrelationSequence pacf(const TimeSeries& series, std::size_t max_lag);

struct PortmanteauResult {
    double statistic;
    double p_value;
    std::size_t dof;
};

/// Ljung-Box: n(n+2) * sum_{k=1..K} r_k^2 / (n-k); p-value from chi^2 with
/// K - fitted_params degrees of freedom.
PortmanteauResult ljung_box(const TimeSeries& residuals, std::size_t max_lag,
                            std::size_t fitted_params);

/// Box-Pierce: n * sum_{k=1..K} r_k^2 with the same degrees of freedom rule.
PortmanteauResult box_pierce(const TimeSeries& residuals, std::size_t max_lag,
                             std::size_t fitted_params);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

double chi_square_cdf(double x, std::size_t dof);

/// Inverse chi^2 CDF by bracketed bisection on the regularized incomplete
/// gamma; |CDF(result) - p| <= 1e-8.
double chi_square_quantile(std::size_t dof, double p);

/// The ceil(p*B)-th order statistic of the samples, clamped to [1, B].
/// No interpolation.
double empirical_quantile(std::span<const double> samples, double p);

/// k-th largest element, i.e. X_(L-k+1); ties resolved by multiplicity.
double k_max(std::span<const double> values, std::size_t k);

/// k-th smallest element, i.e. X_(k).
double k_min(std::span<const double> values, std::size_t k);

/// Order-statistic index ceil(x) with a guard against values that land an
/// epsilon above an integer after rounding.
std::size_t quantile_index(double x);

/// Lower-triangular Cholesky factor L with L*L' = matrix. Requires symmetry
/// within 1e-10 (scaled) and positive definiteness.
SquareMatrix cholesky(const SquareMatrix& matrix);

/// Applies (1 - B^lag) `order` times; output length = length - lag*order.
TimeSeries difference(const TimeSeries& series, std::size_t lag, std::size_t order);

/// Exact inverse of difference(); initial_values supplies the lag*order
/// dropped leading observations of the original series.
TimeSeries invert_difference(const TimeSeries& differenced,
                             std::span<const double> initial_values, std::size_t lag,
                             std::size_t order);

}  // namespace jpr
