#include "jpr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jpr {

namespace {

std::vector<double> acf_values(std::span<const double> xs, std::size_t max_lag,
                               std::string_view op) {
    const std::size_t n = xs.size();
    if (max_lag == 0) fail(Errc::invalid_argument, op, "max_lag must be positive");
    if (max_lag >= n) fail(Errc::lag_too_large, op, "max_lag must be < length");

    const double xbar = mean(xs);
    double denom = 0.0;
    for (double x : xs) denom += (x - xbar) * (x - xbar);
    if (denom == 0.0) fail(Errc::constant_series, op, "series has zero variance");

    std::vector<double> r(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < n; ++t) num += (xs[t] - xbar) * (xs[t - k] - xbar);
        r[k - 1] = num / denom;
    }
    return r;
}

PortmanteauResult portmanteau(const TimeSeries& residuals, std::size_t max_lag,
                              std::size_t fitted_params, bool ljung, std::string_view op) {
    const std::size_t n = residuals.length();
    if (max_lag >= n) fail(Errc::lag_too_large, op, "max_lag must be < length");
    if (max_lag <= fitted_params)
        fail(Errc::degrees_of_freedom_non_positive, op,
             "max_lag must exceed the fitted parameter count");

    const std::vector<double> r = acf_values(residuals.view(), max_lag, op);
    const double dn = static_cast<double>(n);
    double stat = 0.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double rk2 = r[k - 1] * r[k - 1];
        stat += ljung ? rk2 / (dn - static_cast<double>(k)) : rk2;
    }
    stat *= ljung ? dn * (dn + 2.0) : dn;

    const std::size_t dof = max_lag - fitted_params;
    double p = 1.0 - chi_square_cdf(stat, dof);
    return {stat, p, dof};
}

}  // namespace

CorrelationSequence acf(const TimeSeries& series, std::size_t max_lag) {
    return {acf_values(series.view(), max_lag, "acf")};
}

CorrelationSequence pacf(const TimeSeries& series, std::size_t max_lag) {
    const std::vector<double> r = acf_values(series.view(), max_lag, "pacf");

    // Durbin-Levinson: phi[k][j] built in place, alpha(k) = phi[k][k].
    std::vector<double> phi(max_lag, 0.0), prev(max_lag, 0.0);
    std::vector<double> alpha(max_lag);
    phi[0] = r[0];
    alpha[0] = r[0];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        prev = phi;
        double num = r[k - 1];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= prev[j - 1] * r[k - 1 - j];
            den -= prev[j - 1] * r[j - 1];
        }
        if (std::abs(den) < 1e-12)
            fail(Errc::singular_system, "pacf", "Durbin-Levinson denominator vanished");
        double phi_kk = num / den;
        for (std::size_t j = 1; j < k; ++j)
            phi[j - 1] = prev[j - 1] - phi_kk * prev[k - 1 - j];
        phi[k - 1] = phi_kk;
        alpha[k - 1] = phi_kk;
    }
    return {alpha};
}

PortmanteauResult ljung_box(const TimeSeries& residuals, std::size_t max_lag,
                            std::size_t fitted_params) {
    return portmanteau(residuals, max_lag, fitted_params, true, "ljung_box");
}

PortmanteauResult box_pierce(const TimeSeries& residuals, std::size_t max_lag,
                             std::size_t fitted_params) {
    return portmanteau(residuals, max_lag, fitted_params, false, "box_pierce");
}

double regularized_gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // Series expansion.
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Continued fraction (modified Lentz) for the upper tail.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

double chi_square_cdf(double x, std::size_t dof) {
    if (dof == 0) fail(Errc::invalid_argument, "chi_square_cdf", "dof must be positive");
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(static_cast<double>(dof) / 2.0, x / 2.0);
}

double chi_square_quantile(std::size_t dof, double p) {
    if (dof == 0)
        fail(Errc::invalid_argument, "chi_square_quantile", "dof must be positive");
    if (!(p > 0.0 && p < 1.0))
        fail(Errc::p_out_of_range, "chi_square_quantile", "p must lie in (0, 1)");

    const double d = static_cast<double>(dof);
    double lo = 0.0;
    double hi = d + 10.0 * std::sqrt(2.0 * d) + 10.0;
    while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double cdf = chi_square_cdf(mid, dof);
        if (std::abs(cdf - p) <= 1e-10) return mid;
        (cdf < p ? lo : hi) = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

std::size_t quantile_index(double x) {
    double idx = std::ceil(x - 1e-9);
    return idx < 1.0 ? 1 : static_cast<std::size_t>(idx);
}

double empirical_quantile(std::span<const double> samples, double p) {
    if (samples.empty()) fail(Errc::empty_samples, "empirical_quantile", "no samples");
    if (!(p > 0.0 && p < 1.0) && p != 0.0 && p != 1.0)
        fail(Errc::p_out_of_range, "empirical_quantile", "p must lie in [0, 1]");
    const std::size_t count = samples.size();
    std::size_t k = quantile_index(p * static_cast<double>(count));
    k = std::min(k, count);
    std::vector<double> copy(samples.begin(), samples.end());
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     copy.end());
    return copy[k - 1];
}

double k_max(std::span<const double> values, std::size_t k) {
    if (k == 0 || k > values.size())
        fail(Errc::k_out_of_range, "k_max", "k must lie in [1, length]");
    std::vector<double> copy(values.begin(), values.end());
    const std::size_t pos = values.size() - k;  // X_(L-k+1), 0-based
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(pos),
                     copy.end());
    return copy[pos];
}

double k_min(std::span<const double> values, std::size_t k) {
    if (k == 0 || k > values.size())
        fail(Errc::k_out_of_range, "k_min", "k must lie in [1, length]");
    std::vector<double> copy(values.begin(), values.end());
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     copy.end());
    return copy[k - 1];
}

SquareMatrix cholesky(const SquareMatrix& matrix) {
    const std::size_t n = matrix.order();
    const double scale = std::max(1.0, matrix.max_abs());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(matrix(i, j) - matrix(j, i)) > 1e-10 * scale)
                fail(Errc::not_symmetric, "cholesky", "matrix is not symmetric");

    SquareMatrix lower(n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = matrix(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
        if (diag <= 0.0)
            fail(Errc::not_positive_definite, "cholesky",
                 "non-positive pivot at column " + std::to_string(j));
        lower(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double sum = matrix(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
            lower(i, j) = sum / lower(j, j);
        }
    }
    return lower;
}

TimeSeries difference(const TimeSeries& series, std::size_t lag, std::size_t order) {
    if (lag == 0) fail(Errc::invalid_argument, "difference", "lag must be positive");
    if (series.length() <= lag * order)
        fail(Errc::series_too_short, "difference",
             "need length > lag*order = " + std::to_string(lag * order));
    std::vector<double> xs = series.values();
    for (std::size_t o = 0; o < order; ++o) {
        std::vector<double> next(xs.size() - lag);
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = xs[t + lag] - xs[t];
        xs = std::move(next);
    }
    return TimeSeries(std::move(xs));
}

TimeSeries invert_difference(const TimeSeries& differenced,
                             std::span<const double> initial_values, std::size_t lag,
                             std::size_t order) {
    if (lag == 0) fail(Errc::invalid_argument, "invert_difference", "lag must be positive");
    if (initial_values.size() != lag * order)
        fail(Errc::initial_values_mismatch, "invert_difference",
             "expected " + std::to_string(lag * order) + " initial values, got " +
                 std::to_string(initial_values.size()));

    // Rebuild the head of each intermediate stage by differencing the given
    // original head, then integrate from the deepest stage outward.
    std::vector<std::vector<double>> heads(order);
    std::vector<double> head(initial_values.begin(), initial_values.end());
    for (std::size_t o = 0; o < order; ++o) {
        heads[o] = head;
        if (o + 1 < order) {
            std::vector<double> next(head.size() - lag);
            for (std::size_t t = 0; t < next.size(); ++t) next[t] = head[t + lag] - head[t];
            head = std::move(next);
        }
    }

    // Entries of the deeper stage that overlap the head are redundant and
    // skipped; integration starts right after the supplied head.
    std::vector<double> xs = differenced.values();
    for (std::size_t o = order; o-- > 0;) {
        const std::vector<double>& init = heads[o];
        std::vector<double> restored(xs.size() + lag);
        std::copy(init.begin(), init.end(), restored.begin());
        for (std::size_t t = init.size(); t < restored.size(); ++t)
            restored[t] = xs[t - lag] + restored[t - lag];
        xs = std::move(restored);
    }
    return TimeSeries(std::move(xs));
}

}  // namespace jpr
